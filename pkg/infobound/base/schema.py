import logging
from typing import Any, ClassVar, Self

from pydantic import BaseModel, ConfigDict
from pydantic_core import to_jsonable_python

logger = logging.getLogger(__name__)


class BaseSchema(BaseModel):
    """Base class for every immutable value type (distributions, bounds, certificates)"""

    model_config: ClassVar[ConfigDict] = ConfigDict(from_attributes=True, frozen=True, extra="forbid")

    def dump_model(self, fields: set[str] | None = None) -> dict[str, Any]:
        """Return a JSON-compatible dict representation of the instance."""
        data = self.model_dump(include=fields)
        return to_jsonable_python(data)

    @classmethod
    def load(cls, *args, **kwargs) -> Self:
        """Load an instance from a dict and/or keyword arguments."""
        if len(args) > 0 and isinstance(args[0], dict):
            kwargs = {**args[0], **kwargs}
        return cls.model_validate(kwargs)

    @classmethod
    def load_json(cls, text: str | bytes) -> Self:
        return cls.model_validate_json(text)
