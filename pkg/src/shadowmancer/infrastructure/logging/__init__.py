from .icecream_backend import ICECREAM_AVAILABLE, IcecreamBackend
from .shadow_logger import ShadowLogger
from .standard_backend import StandardBackend

__all__ = ["IcecreamBackend", "StandardBackend", "ShadowLogger", "ICECREAM_AVAILABLE"]
