# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Continuity bounds, all in bits.
#

import math

FANNES_MAX_DISTANCE = 1.0 / (2.0 * math.e)
RESOURCE_CONTINUITY_MAX_DISTANCE = 1.0 / 3.0


def fannes_bound(eps: float, d: int) -> float:
    """
    |S(rho1) - S(rho2)| <= eps log2 d + 1 for states at purified distance eps <= 1/(2e).
    """
    if not 0.0 <= eps <= FANNES_MAX_DISTANCE:
        raise ValueError(f"Fannes bound needs 0 <= eps <= 1/(2e), got {eps}")
    return eps * math.log2(d) + 1.0


def coherence_continuity_bound(eps: float, d: int) -> float:
    """
    Bound on |R_c(rho) - R_c(rho')| for ||rho - rho'||_1 = eps <= 1/3 on dimension d.
    For incoherent states min ||log tau||_inf = log2 d (reached by I/d), so the general
    eps (log M + min ||log tau||_inf) + eps log(1/eps) + 4 eps becomes the expression below.
    """
    if not 0.0 <= eps <= RESOURCE_CONTINUITY_MAX_DISTANCE:
        raise ValueError(f"Continuity bound needs 0 <= eps <= 1/3, got {eps}")
    if eps == 0.0:
        return 0.0
    return eps * 2.0 * math.log2(d) + eps * math.log2(1.0 / eps) + 4.0 * eps


def coherence_gain_bound(d_a: int) -> float:
    """
    R_c(rho_AB) - R_c(rho_B) <= 2 log2 |A|.
    """
    return 2.0 * math.log2(d_a)
