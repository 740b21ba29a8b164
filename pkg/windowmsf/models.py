"""
Pydantic models for the windowmsf command line driver.
"""

from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, NonNegativeInt, PositiveFloat, PositiveInt

StructureName = Literal["msf", "conn", "conn-eager", "bipartite", "amsf", "kcert", "cyclefree", "sparsifier"]
CheckMode = Literal["never", "batch", "op"]

STRUCTURES: Tuple[str, ...] = ("msf", "conn", "conn-eager", "bipartite", "amsf", "kcert", "cyclefree", "sparsifier")

# --- Stream Command Models ---

class InsertCommand(BaseModel):
    """Model for a batch insertion."""
    kind: Literal["insert"] = "insert"
    edges: List[Tuple[int, int, int]]

class ExpireCommand(BaseModel):
    """Model for the expiration of the delta oldest edges."""
    kind: Literal["expire"] = "expire"
    delta: NonNegativeInt

class QueryCommand(BaseModel):
    """Model for a named query."""
    kind: Literal["query"] = "query"
    name: str
    args: List[int] = []

class CheckCommand(BaseModel):
    """Model for an oracle check."""
    kind: Literal["check"] = "check"

StreamCommand = Annotated[
    Union[InsertCommand, ExpireCommand, QueryCommand, CheckCommand],
    Field(discriminator="kind"),
]

# --- Structure Models ---

class StructureParams(BaseModel):
    """Model for the validated parameters of one run."""
    structure: StructureName
    n: PositiveInt
    seed: int = 0
    epsilon: PositiveFloat = 0.5
    k: PositiveInt = 2
    max_weight: PositiveInt = 64
    repetitions: Optional[PositiveInt] = None  # sparsifier K
    levels: Optional[PositiveInt] = None  # sparsifier L
    cert_constant: PositiveFloat = 1.0  # sparsifier c_k
    sample_constant: PositiveFloat = 1.0
    sparsifier_k: Optional[PositiveInt] = None
    check: CheckMode = "batch"

# --- Dump Models ---

class CommandLog(BaseModel):
    """Model for a replayable counterexample."""
    params: StructureParams
    commands: List[StreamCommand]
    failure: Optional[str] = None
    line: Optional[int] = None

# --- Report Models ---

class FuzzReport(BaseModel):
    """Model for the outcome of a fuzz run."""
    structure: str
    n: int
    seed: int
    operations: int
    checks: int
    failure: Optional[str] = None
    dump: Optional[str] = None
