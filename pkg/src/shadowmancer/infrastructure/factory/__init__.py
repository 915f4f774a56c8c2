from .backend_factory import BackendFactory

__all__ = ["BackendFactory"]
