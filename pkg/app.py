from flasgger import Swagger
from flask import Flask, jsonify
from flask_limiter.errors import RateLimitExceeded

from cli import cli
from extensions import limiter
from routes.routes import constants_bp, forms_bp, genus_bp, search_bp

app = Flask(__name__)
app.config["SWAGGER"] = {"title": "Arithmetic lattice constants", "uiversion": 3}
swagger = Swagger(app)

limiter.init_app(app)

app.register_blueprint(constants_bp)
app.register_blueprint(genus_bp)
app.register_blueprint(forms_bp)
app.register_blueprint(search_bp)

app.cli.add_command(cli, "lattice")


@app.errorhandler(RateLimitExceeded)
def ratelimit_handler(e):
    return jsonify({"error": "Rate limit exceeded. Please wait."}), 429


if __name__ == '__main__':
    app.run(debug=True, port=5001)
