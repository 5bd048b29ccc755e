from flask import Flask, jsonify
from flask_cors import CORS

from .config import Config
from .errors import MinLenError
from .extensions import configure_logging

__version__ = "1.0.0"


def create_app(config=None):
    app = Flask(__name__)

    # --------------------
    # Config
    # --------------------
    app.config['MAX_CONTENT_LENGTH'] = 1 * 1024 * 1024
    app.json.sort_keys = False
    if config:
        app.config.update(config)

    # --------------------
    # Logging
    # --------------------
    configure_logging(Config.LOG_LEVEL, Config.LOG_JSON)

    # --------------------
    # Enable CORS
    # --------------------
    CORS(app)

    # --------------------
    # Register blueprints
    # --------------------
    from .routes.solve import solve_bp
    from .routes.sweep import sweep_bp
    from .routes.validate import validate_bp

    app.register_blueprint(solve_bp, url_prefix='/api')
    app.register_blueprint(sweep_bp, url_prefix='/api')
    app.register_blueprint(validate_bp, url_prefix='/api')

    # --------------------
    # Errors
    # --------------------
    @app.errorhandler(MinLenError)
    def handle_minlen_error(e):
        return jsonify(e.to_dict()), e.http_status

    return app
