"""Conformally flat spacetimes as sections of the null cone in R^(n+2)."""

from .errors import (BranchDomainError, ChartDegeneracyError, ConfigError,
                     DomainError, NullconeError, ParseError, ScaleFactorError,
                     SingularSeparationError, StepSizeError,
                     UnknownFunctionError)
from .numeric import HyperDual, Tensor4, hyperdual_eval, rank_with_tolerance
from .scalefactor import (PRESETS, eval_a, parse_scale_factor,
                          print_scale_factor, resolve_scale)
from .embedding import (ChartPoint, DefiningFunction, chart_preset,
                        conformal_action, embed_point, induced_metric,
                        rescale_between_sections)

__version__ = "0.1.0"
