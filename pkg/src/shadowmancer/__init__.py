import logging

from .domain.model.version_info import VersionInfo

__version__ = VersionInfo.get_version().version

# library modules log through getLogger(__name__)
logging.getLogger(__name__).addHandler(logging.NullHandler())
