# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Size limits for simulations. Pure protocol states are checked against MAX_AMPLITUDES,
# density matrices against MAX_DENSITY_DIM (side length).
#

from typing import Optional

from qsr_coherence.errors import BudgetExceededError

MAX_AMPLITUDES = 2 ** 13
MAX_DENSITY_DIM = 2 ** 10


def check_amplitudes(what: str, required: int, budget: Optional[int] = None, hint: Optional[str] = None):
    budget = MAX_AMPLITUDES if budget is None else budget
    if required > budget:
        raise BudgetExceededError(f"{what} (amplitudes)", required, budget, hint)


def check_density(what: str, dim: int, budget: Optional[int] = None, hint: Optional[str] = None):
    budget = MAX_DENSITY_DIM if budget is None else budget
    if dim > budget:
        raise BudgetExceededError(f"{what} (density matrix side)", dim, budget, hint)
