import importlib.metadata as metadata
import logging
from typing import Optional

from pydantic import BaseModel

logger = logging.getLogger(__name__)

PACKAGE_NAME = "shadowmancer"


class VersionInfo(BaseModel):
    """Version information of the installed package."""

    name: str
    version: str
    summary: Optional[str] = None

    @classmethod
    def get_version(cls) -> "VersionInfo":
        try:
            pkg_info = metadata.metadata(PACKAGE_NAME)
            return cls(name=PACKAGE_NAME, version=metadata.version(PACKAGE_NAME), summary=pkg_info.get("Summary"))
        except metadata.PackageNotFoundError:
            logger.debug("%s is not installed, reporting a development version", PACKAGE_NAME)
            return cls(name=PACKAGE_NAME, version="dev", summary="classical-shadows toolkit (development checkout)")

    def __str__(self) -> str:
        return f"{self.name} v{self.version}"

    @property
    def is_dev_version(self) -> bool:
        return self.version == "dev" or self.version.endswith(".dev0")
