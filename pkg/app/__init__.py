from flask import Flask, jsonify
from flask_cors import CORS

from app.config import MAX_REQUEST_SIZE_KB
from app.services.errors import OverflowUnrepresentable, PosetError, ReductionDiverged, ResourceBound


def create_app():
    app = Flask(__name__)
    CORS(app)

    app.config['MAX_CONTENT_LENGTH'] = MAX_REQUEST_SIZE_KB * 1024

    from app.routes import index, poset, reduce, sweep, system
    app.register_blueprint(poset.bp)
    app.register_blueprint(index.bp)
    app.register_blueprint(reduce.bp)
    app.register_blueprint(sweep.bp)
    app.register_blueprint(system.bp)

    @app.errorhandler(PosetError)
    def bad_poset(e):
        return jsonify({'error': str(e)}), 400

    @app.errorhandler(ResourceBound)
    @app.errorhandler(OverflowUnrepresentable)
    @app.errorhandler(ReductionDiverged)
    def over_budget(e):
        return jsonify({'error': str(e)}), 400

    @app.errorhandler(413)
    def too_large(e):
        return jsonify({'error': f'Request too large. Maximum size is {MAX_REQUEST_SIZE_KB}KB'}), 413

    @app.errorhandler(404)
    def not_found(e):
        return jsonify({'error': 'Not found'}), 404

    @app.errorhandler(500)
    def internal_error(e):
        return jsonify({'error': 'Internal server error'}), 500

    return app
