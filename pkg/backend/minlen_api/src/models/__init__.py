from src.models.core import BoundState, Deformation, PhysicalParams, Wavefunction
from src.models.potentials import CoulombLike, Delta, DoubleDelta, PotentialSpec
from src.models.records import ResultRecord, RunConfig, StateRecord, SweepResult, SweepSpec
