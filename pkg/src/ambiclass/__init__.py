"""Ambiguous ideal class groups of quadratic fields and the identities around them."""

from .abgroup import FinAbGroup, GroupHom, smith_normal_form
from .ambiguity import VerificationReport, predicted_counts, verify_discriminant
from .forms import QForm, class_group
from .quadfield import OIdeal, QuadNumber, validate_discriminant
from .units import fundamental_unit, hilbert_symbol

__version__ = "0.1.0"
