"""
Payloads da CLI (JSON) por comando.

Atalho Severi–Brauer: {ind, exp?, degree?, char_divides_index?, characteristic?, flags,
field_kind?, hypotheses?, ind_over_L?} ou {algebra: {...}, flags, ...}.

Fixture de cadeia: {class | algebra, k, nodes: [{id, parent, extension}],
left, right}; o nó base se chama "F".
"""

from typing import Any, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from flows.brauer.csa import AlgebraDescriptor
from flows.brauer.schemas import FormalExtension, GlobalBrauerClass, LocalFieldDescriptor
from flows.severi_brauer.schemas import FlagDescriptor
from shared.errors import InputError

SCHEMA_VERSION = "1"

COMMANDS = (
    "class-index",
    "class-decompose",
    "class-restrict",
    "sb-index",
    "sb-generic-index",
    "sb-bound",
    "sb-rational-point",
    "local-ext-count",
    "construct-ext",
    "construct-power-ext",
    "chain",
    "verify-chain",
    "oracle-suite",
)


class Request(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Literal[COMMANDS]
    payload: Any = None
    hypotheses: Tuple[str, ...] = ()


class SBPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    algebra: Optional[AlgebraDescriptor] = None
    ind: Optional[int] = Field(default=None, ge=1)
    exp: Optional[int] = Field(default=None, ge=1)
    degree: Optional[int] = Field(default=None, ge=1)
    char_divides_index: Optional[bool] = None
    characteristic: Optional[int] = Field(default=None, ge=0)
    flags: Tuple[int, ...]
    field_kind: Optional[Literal["abstract", "local", "global"]] = None
    hypotheses: Tuple[str, ...] = ()
    ind_over_L: Optional[int] = None

    @model_validator(mode="after")
    def one_algebra(self) -> "SBPayload":
        if (self.algebra is None) == (self.ind is None):
            raise InputError("invalid-payload", "informe 'algebra' ou 'ind' (exatamente um)")
        return self

    def to_descriptor(self) -> FlagDescriptor:
        algebra = self.algebra or AlgebraDescriptor(
            kind="abstract",
            index=self.ind,
            exponent=self.exp,
            degree=self.degree,
            char_divides_index=self.char_divides_index,
            characteristic=self.characteristic,
        )
        return FlagDescriptor(algebra=algebra, flags=self.flags)


class RestrictPayload(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    brauer_class: GlobalBrauerClass = Field(alias="class")
    extension: FormalExtension


class LocalCountPayload(BaseModel):
    model_config = ConfigDict(extra="forbid")

    descriptor: LocalFieldDescriptor
    p: int
    catalog: Optional[int] = Field(default=None, ge=0)


class LemmaPayload(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    brauer_class: GlobalBrauerClass = Field(alias="class")
    L0: FormalExtension
    L1: FormalExtension
    allow_coincident: bool = False


class PowerPayload(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    brauer_class: GlobalBrauerClass = Field(alias="class")
    k: int


class ChainNodeSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    parent: str = "F"
    extension: FormalExtension


class ChainFixture(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    brauer_class: Optional[GlobalBrauerClass] = Field(default=None, alias="class")
    algebra: Optional[AlgebraDescriptor] = None
    k: int
    nodes: List[ChainNodeSpec]
    left: str
    right: str

    @model_validator(mode="after")
    def one_base(self) -> "ChainFixture":
        if (self.brauer_class is None) == (self.algebra is None):
            raise InputError("invalid-payload", "informe 'class' ou 'algebra' (exatamente um)")
        return self

    def to_algebra(self) -> AlgebraDescriptor:
        if self.algebra is not None:
            return self.algebra
        return AlgebraDescriptor(kind="global", brauer_data=self.brauer_class)
