# Blueprints are registered in create_app()
