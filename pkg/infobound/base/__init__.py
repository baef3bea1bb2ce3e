from infobound.base.cumulant import BaseCumulant, MirroredCumulant
from infobound.base.schema import BaseSchema

__all__ = [
    "BaseCumulant",
    "BaseSchema",
    "MirroredCumulant",
]
