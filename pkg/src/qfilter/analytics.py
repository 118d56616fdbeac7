"""Closed-form bounds and exact counting for the two-ancilla filter.

Everything here is either an exact combinatorial count (integer arithmetic)
or an explicit formula; the exact quantities double as oracles for the
bounds in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channels import PauliChannel
from .filters import ae_removes
from .pauli import PauliString, PauliTypeCount, enumerate_paulis


@dataclass
class BoundReport:
    """One bound-versus-exact comparison row."""

    params: dict
    bound: float
    exact: float
    satisfied: bool
    slack: float

    @staticmethod
    def lower(params: dict, bound: float, exact: float) -> "BoundReport":
        return BoundReport(params, bound, exact, exact >= bound, exact - bound)

    @staticmethod
    def upper(params: dict, bound: float, exact: float) -> "BoundReport":
        return BoundReport(params, bound, exact, exact <= bound, bound - exact)


def _multinomial(w: int, x: int, y: int, z: int) -> int:
    assert x + y + z == w
    return math.factorial(w) // (math.factorial(x) * math.factorial(y) * math.factorial(z))


def removed_count_exact(n: int, w: int) -> int:
    """Number of weight-w Paulis rejected by the two-ancilla filter.

    Sums multinomial type counts over the letter multiplicities (x, y, z)
    for which exactly two of (w, x, y, z) are odd; no enumeration of the
    4^n group is needed.
    """
    assert 0 <= w <= n
    total = 0
    for x in range(w + 1):
        for y in range(w - x + 1):
            z = w - x - y
            if ae_removes(PauliTypeCount(x, y, z)):
                total += _multinomial(w, x, y, z)
    return math.comb(n, w) * total


def removed_count_lower_bound(n: int, w: int, form: str = "appendix") -> float:
    """Lower bound on the rejected weight-w count.

    form "appendix": C(n,w) 3^w / (1 + w(w-1)); form "theorem" is the
    weaker corollary 3^w / w^2 per weight-w subset.
    """
    assert 1 <= w <= n
    if form == "appendix":
        return math.comb(n, w) * (3 ** w) / (1 + w * (w - 1))
    assert form == "theorem"
    return math.comb(n, w) * (3 ** w) / (w * w)


def removed_total_lower_bound(n: int) -> float:
    """Lower bound on the total rejected count: 4^n / (n^2 - n + 1)."""
    return (4 ** n) / (n * n - n + 1)


def ae_success_prob_bound(n: int, p: float) -> float:
    """Upper bound on the two-ancilla acceptance probability under
    independent depolarizing noise at rate p per qubit."""
    q = 1.0 - p
    return 1.0 - (1.0 - q ** n) * (1 + n) / (1 + n ** 3)


def ae_infidelity_bound(eps_in: float) -> float:
    """Filtered output infidelity is at most twice the squared input value."""
    return 2.0 * eps_in * eps_in


@dataclass
class SymmetricFilterStats:
    success_prob: float
    output_fidelity: float
    output_infidelity: float
    surviving: dict[tuple[int, int, int], float]


def symmetric_channel_engine(n: int, p_x: float, p_y: float,
                              p_z: float) -> SymmetricFilterStats:
    """Exact two-ancilla filter statistics for i.i.d. single-qubit noise.

    Permutation symmetry reduces the channel to type counts (x, y, z); the
    trinomial sum is exact and runs in O(n^3) for any n.
    """
    p0 = 1.0 - p_x - p_y - p_z
    assert p0 >= -1e-12
    success = 0.0
    surviving: dict[tuple[int, int, int], float] = {}
    for x in range(n + 1):
        for y in range(n - x + 1):
            for z in range(n - x - y + 1):
                if ae_removes(PauliTypeCount(x, y, z)):
                    continue
                w = x + y + z
                count = (math.comb(n, x) * math.comb(n - x, y) * math.comb(n - x - y, z))
                mass = count * (p_x ** x) * (p_y ** y) * (p_z ** z) * (p0 ** (n - w))
                surviving[(x, y, z)] = mass
                success += mass
    fid = (p0 ** n) / success if success > 0 else 0.0
    return SymmetricFilterStats(success, fid, 1.0 - fid,
                                {k: v / success for k, v in surviving.items()})


def t_gate_purified(p_x: float, p_y: float, p_z: float) -> PauliChannel:
    """Output of the Z-probe corrected filter around a diagonal gate.

    X and Y components are folded back: the filtered channel keeps only an
    identity and a Z component, with fidelity raised by the X rate.
    """
    return PauliChannel.from_letter_probs(
        {"I": 1.0 - p_x - p_y - p_z + p_x, "Z": p_y + p_z})


def ccz_purified_fidelity(p: float) -> float:
    """Fidelity of three purified depolarizing channels around a CCZ gate."""
    return (1.0 - 2.0 * p / 3.0) ** 3


def f_critical(p_c: float, p_t: float) -> float:
    """Lower bound on the corrected-channel fidelity with noisy filter gates.

    p_c and p_t are the depolarizing rates on the control and target of each
    two-qubit filter gate.
    """
    a = 1.0 - 2.0 * p_c / 3.0
    b = 1.0 - 2.0 * p_t / 3.0
    return (1.0 - p_c) * (1.0 - p_t) * (a ** 2) * (b ** 2) * a


def full_correction_scaling(f_in: float, p: float, k: int) -> float:
    """Fidelity after k fully corrected channel uses at rate p."""
    return f_in * (1.0 / math.sqrt(1.0 - p)) ** k


def select_gate_count(n: int) -> int:
    """Two-qubit gate count of the prepared-filter SELECT construction."""
    return 2 * n * n + 2 * n


def ancilla_lower_bound(n: int, k: int) -> float:
    """Order lower bound on ancillae needed to filter k-of-n weight classes."""
    assert 1 <= k <= n
    return k * math.log2(n / k) if n > k else 0.0


def global_noise_model(n: int, eps: float) -> tuple[float, float]:
    """(input fidelity, filtered fidelity lower bound) for decaying global noise.

    Weight-w error classes carry total probability F * eps^w for
    w = 0..n-1, so F = (1 - eps) / (1 - eps^n); the filtered output
    fidelity is at least 1 - 2 eps^2.
    """
    assert 0.0 < eps < 1.0
    f_in = (1.0 - eps) / (1.0 - eps ** n)
    return f_in, 1.0 - 2.0 * eps * eps


def global_noise_channel(n: int, eps: float) -> PauliChannel:
    """Explicit channel realizing the decaying global noise model.

    The weight-w class probability is shared uniformly over its
    C(n,w) 3^w members.  Guarded to small n by the enumeration.
    """
    f_in, _ = global_noise_model(n, eps)
    probs: dict[PauliString, float] = {}
    for p in enumerate_paulis(n, max_weight=n - 1):
        w = p.weight()
        probs[p] = f_in * (eps ** w) / (math.comb(n, w) * 3 ** w)
    return PauliChannel(n, probs)


def theorem1_report(n: int, p: float) -> tuple[BoundReport, BoundReport]:
    """Exact filtered infidelity and acceptance versus their bounds."""
    stats = symmetric_channel_engine(n, p / 3.0, p / 3.0, p / 3.0)
    eps_in = 1.0 - (1.0 - p) ** n
    inf_report = BoundReport.upper({"n": n, "p": p, "kind": "infidelity"},
                                   ae_infidelity_bound(eps_in), stats.output_infidelity)
    acc_report = BoundReport.upper({"n": n, "p": p, "kind": "acceptance"},
                                   ae_success_prob_bound(n, p), stats.success_prob)
    return inf_report, acc_report
