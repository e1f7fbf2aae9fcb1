"""2-adic (and general p-adic) measures, Iwasawa series, characteristic
ideals and Kolyvagin-derivative combinatorics."""

from .padic import PadicContext, PadicInt, kappa_power, padic_exp, padic_log, unit_decompose
from .series import BaseRing, IwasawaSeries, WeierstrassData
from .cyclotomic import CycRing, CycElt, eval_at_level, invariant_identity_check, norm_to_base
from .mahler import UnitMeasure, dirac, integrate_unit_character, moment, pushforward_scale, restrict_to_units
from .coleman import coleman_tilde, formal_add, tilde_is_multiplicative
from .galois import (
    CharacterOfH,
    FiniteAbelianGroup,
    GaloisMeasure,
    PseudoMeasure,
    chi_component,
    euler_factor_adjust,
    iwasawa_function,
    lp_value,
    pushforward_group,
    recover_from_alpha,
    restrict_to_quotient,
)
from .lambda_modules import PresentedModule, char_ideal, elementary_module, is_finitely_generated_over_Zp, is_mu_zero, ses_compose
from .euler import DerivativeGroup, LocalDatum, SyntheticEulerSystem, invariance_check, kolyvagin_derivative

__all__ = [n for n in dir() if not n.startswith("_")]
