from .numeric import INF
from .types import Axiom, AxiomStatus, Form, Report, Verdict, Witness

__version__ = "0.1.0"
