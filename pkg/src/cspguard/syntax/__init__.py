"""Front end: terms, the ``.cspl`` parser/printer, Bekič elaboration, classification."""

from .classify import Kind, classify, is_sequential, is_sfs
from .elaborate import bekic_elaborate
from .parser import (
    CspSyntaxError,
    DuplicateDefinition,
    ParseError,
    Spec,
    UndeclaredEvent,
    UnknownDefinition,
    UnknownRoot,
    parse,
    parse_term,
)
from .printer import print_spec, print_term
from .terms import (
    DIV,
    SKIP,
    STOP,
    Div,
    ExtChoice,
    Hide,
    IntChoice,
    Mu,
    OpenTermError,
    Parallel,
    Prefix,
    Rename,
    Seq,
    Skip,
    Stop,
    Term,
    Var,
    alpha_normalize,
    binders,
    contains_div,
    events_of,
    fuse_hiding,
    substitute,
    subterms,
    unfold,
    unique_binders,
)

__all__ = [name for name in dir() if not name.startswith("_")]
