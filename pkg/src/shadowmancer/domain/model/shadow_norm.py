from typing import Optional

from pydantic import BaseModel, ConfigDict

UNLEARNABLE = "UNLEARNABLE"


class ShadowNorm(BaseModel):
    """Squared shadow norm of one operator under one protocol.

    ``value`` is ``None`` when the operator is unlearnable.
    """

    model_config = ConfigDict(frozen=True)

    value: Optional[float]
    operator_label: str = ""
    protocol_label: str = ""

    @classmethod
    def unlearnable(cls, operator_label: str = "", protocol_label: str = "") -> "ShadowNorm":
        return cls(value=None, operator_label=operator_label, protocol_label=protocol_label)

    @property
    def is_unlearnable(self) -> bool:
        return self.value is None

    def display(self) -> str:
        return UNLEARNABLE if self.value is None else repr(self.value)
