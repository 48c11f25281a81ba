"""Petri nets with name creation: firing, canonical forms and decision procedures."""

from .backward import (CoverResult, PredBasisEntry, coverable, min_t_sigma, pred_basis,
                       pred_of_min, restricted_coverable)
from .forward import AnalysisResult, Measurement, bounded, measure, reach_set, reachable_alpha, terminates
from .limits import Limits, ResourceExhausted
from .net import (DOT, Firing, Marking, ModeError, NotEnabled, NuNet, PTNet, embed_pt,
                  enabled_firings, fire, is_enabled, is_fresh, is_normal, successors, validate_net)
from .order import (Antichain, CanonicalMarking, alpha_equiv, canonicalize, leq_alpha,
                    minor_set, multiset_embed)
from .reductions import (InhibitorNet, ResetNet, Translation, fire_inhibitor, fire_reset,
                         inhibitor_marking, inhibitor_to_nu, reset_marking, reset_to_nu)
from .witness import ReplayError, replay

__version__ = "0.1.0"
