"""Adversarial low-soundness error constructions and the exhaustive oracle.

Three constructions drive the upper bounds on relative soundness r(delta):

* expander attack: single-qudit restrictions of a 1-independent constraint
  set, each placed on the qudit with the fewest multi-intersecting checks;
  achieves r <= 2*eps when small sets expand with error eps < 1/2.
* alphabet attack: majority restriction per chosen qudit; achieves
  r <= alpha(d) = 1 - 1/(d^2 - 1) for delta <= 1/(k^3 D_L).
* island attack: random sparse error on the neighborhood of a
  k-independent set; statistics compared against the binomial model and
  the expected-penalty bound p*alpha*|S|*D_L*(1 - p*alpha*eps').

The soundness profile enumerates all errors up to a coset-weight cap and
records the exact minimum penalty per coset weight (penalty and coset
weight are both functions of the syndrome alone).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliOp, nonidentity_symbols
from .search import candidate_batches, candidates_at_weight
from .stabilizer import BoundedWeight, StabilizerCode


class NotAnErrorError(ValueError):
    """The operator commutes with every generator; r is undefined for it."""


def alphabet_t(d: int) -> float:
    return 1.0 / (d * d - 1)


def alphabet_alpha(d: int) -> float:
    return 1.0 - alphabet_t(d)


def gamma_gap(k: int) -> float:
    return min(1e-3, 0.01 / k)


@dataclass(frozen=True)
class AttackReport:
    """Evaluation of one error against one code.

    delta is derived from the coset weight (weight modulo the
    centralizer); when that weight is interval-valued, r is an interval
    and the pessimistic end (largest r, weakest attack) should be used in
    any inequality check.
    """

    error: PauliOp
    weight: int
    wt_mod_group: BoundedWeight
    wt_mod_centralizer: BoundedWeight
    penalty: int
    m: int
    k: int
    n: int
    D_L: int | None
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def R(self) -> float:
        return self.penalty / self.m

    @property
    def raw_delta(self) -> float:
        return self.weight / self.n

    @property
    def delta_low(self) -> float:
        return self.wt_mod_centralizer.low / self.n

    @property
    def delta_high(self) -> float:
        return self.wt_mod_centralizer.high / self.n

    def _r_at(self, delta: float) -> float:
        return self.R / min(self.k * delta, 1.0)

    @property
    def r_pessimistic(self) -> float:
        """Largest consistent r (uses the smallest consistent coset weight)."""
        return self._r_at(self.delta_low)

    @property
    def r_optimistic(self) -> float:
        return self._r_at(self.delta_high)

    @property
    def r(self) -> float:
        if not self.wt_mod_centralizer.exact:
            raise ValueError("r is interval-valued; use r_pessimistic/r_optimistic")
        return self.r_pessimistic

    def to_json(self) -> dict:
        exact = self.wt_mod_centralizer.exact
        return {
            "error": self.error.to_json(),
            "weight": {"kind": "exact", "value": self.weight},
            "wt_mod_group": self.wt_mod_group.to_json(),
            "wt_mod_centralizer": self.wt_mod_centralizer.to_json(),
            "penalty": {"kind": "exact", "value": self.penalty},
            "m": self.m,
            "k": self.k,
            "n": self.n,
            "D_L": self.D_L,
            "R": {"kind": "exact", "value": self.R},
            "raw_delta": {"kind": "exact", "value": self.raw_delta},
            "delta": (
                {"kind": "exact", "value": self.delta_low}
                if exact
                else {"kind": "interval", "low": self.delta_low, "high": self.delta_high}
            ),
            "r": (
                {"kind": "exact", "value": self.r_pessimistic}
                if exact
                else {
                    "kind": "interval",
                    "pessimistic": self.r_pessimistic,
                    "optimistic": self.r_optimistic,
                }
            ),
            "seed": self.seed,
            "meta": self.meta,
        }


def evaluate_r(
    code: StabilizerCode,
    e: PauliOp,
    budget: int | None = None,
    group_budget: int | None = 0,
    seed: int | None = None,
    meta: dict | None = None,
) -> AttackReport:
    """Measure penalty, coset weights and r for one error.

    budget caps the weight-modulo-centralizer search (which sets delta);
    group_budget caps the independent weight-modulo-group search (default
    0: report only the trivial certified interval, it does not enter r).
    """
    if e.is_identity(up_to_phase=True):
        raise NotAnErrorError("identity operator")
    penalty = code.penalty(e)
    if penalty == 0:
        raise NotAnErrorError(
            "operator commutes with every generator (stabilizer or logical element)"
        )
    wz = code.wt_mod_centralizer(e, budget=budget)
    wg = code.wt_mod_group(e, budget=group_budget)
    return AttackReport(
        error=e,
        weight=e.weight(),
        wt_mod_group=wg,
        wt_mod_centralizer=wz,
        penalty=penalty,
        m=code.m,
        k=code.k,
        n=code.n,
        D_L=code.D_L,
        seed=seed,
        meta=meta or {},
    )


# --------------------------------------------------------------------------
# expander attack
# --------------------------------------------------------------------------

def _multi_intersection_count(code: StabilizerCode, q: int, u: int) -> int:
    """Checks acting on q that share >= 2 qudits with generator u's support."""
    g = code.graph
    u_mask = g.right_masks[u]
    return sum(
        1 for c in g.left_adj[q] if (g.right_masks[c] & u_mask).bit_count() >= 2
    )


def _select_qudit(code: StabilizerCode, u: int) -> tuple[int, int]:
    """q(u): the qudit of u minimizing the multi-intersection count (lowest index ties)."""
    best_q, best_a = None, None
    for q in code.graph.right_adj[u]:
        a = _multi_intersection_count(code, q, u)
        if best_a is None or a < best_a:
            best_q, best_a = q, a
    return best_q, best_a


def _tensor_restrictions(code: StabilizerCode, picks: list[tuple[int, int]]) -> PauliOp:
    """Product of u|_q over (u, q) picks; supports are disjoint by independence."""
    x = np.zeros(code.n, dtype=np.int64)
    z = np.zeros(code.n, dtype=np.int64)
    for u, q in picks:
        g = code.generators[u]
        x[q] = g.x[q]
        z[q] = g.z[q]
    return PauliOp(code.d, code.n, x, z, 0)


def _target_size(code: StabilizerCode, delta: float) -> int:
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return max(1, math.floor(delta * code.n))


def _independent_set(code: StabilizerCode, t: int, target: int, seed: int) -> list[int]:
    u = code.graph.greedy_t_independent(t, target, seed=seed)
    if not u:
        raise ValueError(f"no non-empty {t}-independent constraint set found")
    assert code.graph.verify_t_independent(u, t)
    return u


def expander_attack(
    code: StabilizerCode, delta: float, seed: int = 0, budget: int | None = None
) -> AttackReport:
    """Tensor error of single-qudit generator restrictions on a 1-independent set.

    Targets |U| = floor(delta * n); a greedy shortfall is recorded in the
    report metadata and the attack proceeds with the achieved size.  When
    floor(delta * n) = 0 the attack proceeds with a single constraint and
    flags the shortfall (the guarantee needs |U| >= 1).
    """
    target = _target_size(code, delta)
    u_set = _independent_set(code, 1, target, seed)
    picks = []
    predicted = 0
    for u in u_set:
        q, a = _select_qudit(code, u)
        picks.append((u, q))
        predicted += a
    e = _tensor_restrictions(code, picks)
    meta = {
        "attack": "expander",
        "target_size": target,
        "U": list(u_set),
        "shortfall": target - len(u_set),
        "chosen_qudits": [q for _, q in picks],
        "predicted_penalty_bound": predicted,
    }
    report = evaluate_r(code, e, budget=budget, seed=seed, meta=meta)
    assert report.penalty <= predicted
    return report


def refined_expander_attack(
    code: StabilizerCode, u_set: list[int], delta_prime: float, budget: int | None = None
) -> AttackReport:
    """Restriction attack on the best unique-neighbor sub-slice of Gamma(U).

    S = Gamma(U) is partitioned into k classes (one qudit per constraint
    each); the class most examined by unique neighbors of S is selected,
    and within it the floor(delta_prime * n) qudits with the most unique
    neighbors form the support of the error.
    """
    g = code.graph
    if not g.verify_t_independent(u_set, 1):
        raise ValueError("U is not 1-independent")
    size = math.floor(delta_prime * code.n)
    if not 1 <= size <= len(u_set):
        raise ValueError(f"delta_prime * n = {size} outside [1, |U| = {len(u_set)}]")
    s_all = sorted(g.gamma(u_set, "right"))
    s_mask = 0
    for q in s_all:
        s_mask |= 1 << q
    # unique-neighbor count per qudit of S: checks seeing exactly one S-qudit
    uniq = {
        q: sum(1 for c in g.left_adj[q] if (g.right_masks[c] & s_mask).bit_count() == 1)
        for q in s_all
    }
    stats = g.expansion_stats(s_all)
    # partition class i = the i-th qudit (sorted) of each constraint's support
    classes = [[(u, g.right_adj[u][i]) for u in u_set] for i in range(code.k)]
    best_class = max(classes, key=lambda cls: sum(uniq[q] for _, q in cls))
    best_class.sort(key=lambda uq: (-uniq[uq[1]], uq[1]))
    picks = best_class[:size]
    e = _tensor_restrictions(code, picks)
    meta = {
        "attack": "refined_expander",
        "U": list(u_set),
        "chosen_qudits": [q for _, q in picks],
        "epsilon_gamma_u": stats.epsilon,
        "r_bound": 2 * stats.epsilon,
        "gamma_u_stats": stats.to_json(),
    }
    return evaluate_r(code, e, budget=budget, meta=meta)


# --------------------------------------------------------------------------
# alphabet attack
# --------------------------------------------------------------------------

def majority_restriction(code: StabilizerCode, q: int) -> tuple[int, int, int]:
    """Most frequent non-identity (x, z) restriction at qudit q.

    Returns (x, z, count); ties broken lexicographically.  By pigeonhole
    count/deg >= t(d), so the restriction commutes with at least a t(d)
    fraction of the checks at q.
    """
    counts: dict[tuple[int, int], int] = {}
    for c in code.graph.left_adj[q]:
        g = code.generators[c]
        sym = (int(g.x[q]), int(g.z[q]))
        counts[sym] = counts.get(sym, 0) + 1
    sym = min(counts, key=lambda s: (-counts[s], s))
    return sym[0], sym[1], counts[sym]


def alphabet_attack(
    code: StabilizerCode, delta: float, seed: int = 0, budget: int | None = None
) -> AttackReport:
    """Tensor of majority restrictions MAJ(q(u)) over a 1-independent set."""
    target = _target_size(code, delta)
    u_set = _independent_set(code, 1, target, seed)
    x = np.zeros(code.n, dtype=np.int64)
    z = np.zeros(code.n, dtype=np.int64)
    chosen = []
    per_qudit_fraction = []
    for u in u_set:
        q = code.graph.right_adj[u][0]
        mx, mz, cnt = majority_restriction(code, q)
        x[q], z[q] = mx, mz
        chosen.append(q)
        deg = len(code.graph.left_adj[q])
        viol = sum(
            1
            for c in code.graph.left_adj[q]
            if (code.generators[c].x[q] * mz - code.generators[c].z[q] * mx) % code.d
        )
        frac = viol / deg
        assert frac <= alphabet_alpha(code.d) + 1e-12, "majority count bound violated"
        per_qudit_fraction.append(frac)
    e = PauliOp(code.d, code.n, x, z, 0)
    k, dl = code.k, code.D_L
    meta = {
        "attack": "alphabet",
        "target_size": target,
        "U": list(u_set),
        "shortfall": target - len(u_set),
        "chosen_qudits": chosen,
        "per_qudit_violation_fraction": per_qudit_fraction,
        "alpha": alphabet_alpha(code.d),
        "delta_precondition_met": (
            dl is not None and delta <= 1.0 / (k**3 * dl)
        ),
    }
    return evaluate_r(code, e, budget=budget, seed=seed, meta=meta)


# --------------------------------------------------------------------------
# island attack
# --------------------------------------------------------------------------

@dataclass
class IslandTrialStats:
    """Aggregate statistics of the random sparse island-error process."""

    trials: int
    u_set: list[int]
    s_qudits: list[int]
    k: int
    p: float
    epsilon_prime: float
    expansion_hypothesis_met: bool  # measured eps' >= 0.32
    histogram: np.ndarray  # islands-with-i-errors counts, i = 0..k
    mean_penalty: float
    penalty_sem: float  # sample standard error of the mean penalty
    mean_weight: float
    empirical_qudit_rate: float
    zero_coset_weight_trials: int  # trials whose error lies in the group
    expected_penalty_bound: float  # p*alpha*|S|*D_L*(1 - p*alpha*eps')
    best_trial: AttackReport
    seed: int

    def binomial_model(self) -> np.ndarray:
        """Expected per-island error-count masses B(i) = Binom(k, p)."""
        i = np.arange(self.k + 1)
        return np.array(
            [math.comb(self.k, int(j)) * self.p**j * (1 - self.p) ** (self.k - j) for j in i]
        )

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "U": self.u_set,
            "S_size": len(self.s_qudits),
            "k": self.k,
            "p": self.p,
            "epsilon_prime": {"kind": "exact", "value": self.epsilon_prime},
            "expansion_hypothesis_met": self.expansion_hypothesis_met,
            "histogram": self.histogram.tolist(),
            "binomial_model": self.binomial_model().tolist(),
            "mean_penalty": {"kind": "sampled", "value": self.mean_penalty, "sem": self.penalty_sem},
            "mean_weight": {"kind": "sampled", "value": self.mean_weight},
            "empirical_qudit_rate": {"kind": "sampled", "value": self.empirical_qudit_rate},
            "zero_coset_weight_trials": self.zero_coset_weight_trials,
            "expected_penalty_bound": {"kind": "exact", "value": self.expected_penalty_bound},
            "best_trial": self.best_trial.to_json(),
            "seed": self.seed,
        }


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based stream: every trial reproducible from (seed, index)."""
    return np.random.Generator(np.random.Philox(key=seed, counter=trial * (1 << 64)))


def island_attack(
    code: StabilizerCode,
    trials: int,
    seed: int,
    u_target: int | None = None,
    best_budget: int | None = None,
) -> IslandTrialStats:
    """Random sparse errors on S = Gamma(U) for a greedy k-independent U.

    Per trial each qudit of S independently stays identity with
    probability 1 - p (p = 1/(10k)) or takes each of the d^2 - 1
    non-identity symbols with probability p * t(d).  Records the
    per-island error-count histogram, penalties, and the best trial
    (largest penalty per unit weight) re-evaluated as an AttackReport.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    k = code.k
    u_set = _independent_set(code, k, u_target or code.m, seed)
    g = code.graph
    s = sorted(g.gamma(u_set, "right"))
    stats = g.expansion_stats(s)
    eps_prime = stats.epsilon
    p = 1.0 / (10 * k)
    symbols = np.array(nonidentity_symbols(code.d), dtype=np.int64)
    island_qudits = [np.array(g.right_adj[u]) for u in u_set]
    s_arr = np.array(s)
    s_pos = {q: i for i, q in enumerate(s)}
    island_pos = [np.array([s_pos[q] for q in iq]) for iq in island_qudits]

    histogram = np.zeros(k + 1, dtype=np.int64)
    penalties = np.zeros(trials)
    weights = np.zeros(trials)
    nonid_total = 0
    zero_coset = 0
    best = None  # (score, trial_index, error)
    for t in range(trials):
        rng = _trial_rng(seed, t)
        active = rng.random(len(s)) < p
        x = np.zeros(code.n, dtype=np.int64)
        z = np.zeros(code.n, dtype=np.int64)
        idx = np.nonzero(active)[0]
        if idx.size:
            picks = rng.integers(len(symbols), size=idx.size)
            x[s_arr[idx]] = symbols[picks, 0]
            z[s_arr[idx]] = symbols[picks, 1]
        e = PauliOp(code.d, code.n, x, z, 0)
        for pos in island_pos:
            histogram[int(active[pos].sum())] += 1
        pen = code.penalty(e)
        w = int(idx.size)
        penalties[t] = pen
        weights[t] = w
        nonid_total += w
        if w and code.in_span(e.symplectic()):
            zero_coset += 1
        if pen > 0 and w > 0:
            score = pen / w  # optimistic-r proxy at fixed k, n
            if best is None or score > best[0]:
                best = (score, t, e)
    if best is None:
        raise ValueError("no trial produced an error; increase trials or |U|")
    best_report = evaluate_r(
        code,
        best[2],
        budget=best_budget,
        seed=seed,
        meta={"attack": "island", "trial": best[1], "U": list(u_set)},
    )
    alpha = alphabet_alpha(code.d)
    bound = p * alpha * len(s) * (code.D_L or 0) * (1 - p * alpha * eps_prime)
    sem = float(np.std(penalties, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return IslandTrialStats(
        trials=trials,
        u_set=list(u_set),
        s_qudits=s,
        k=k,
        p=p,
        epsilon_prime=eps_prime,
        expansion_hypothesis_met=eps_prime >= 0.32,
        histogram=histogram,
        mean_penalty=float(penalties.mean()),
        penalty_sem=sem,
        mean_weight=float(weights.mean()),
        empirical_qudit_rate=nonid_total / (trials * len(s)),
        zero_coset_weight_trials=zero_coset,
        expected_penalty_bound=bound,
        best_trial=best_report,
        seed=seed,
    )


def weight_threshold_y(k: int) -> float:
    """Tabulated low-weight tail thresholds y(k) for the smoke test."""
    table = {4: 0.9985, 5: 0.9992}
    if k in table:
        return table[k]
    if 6 <= k <= 11:
        return 0.9999
    raise ValueError(f"no tabulated threshold for k={k}")


def low_weight_frequency(stats: IslandTrialStats) -> dict:
    """Empirical frequency of wt_mod_group below |S| * p * y(k).

    When the threshold is <= 1 the event is exactly 'the error lies in
    the group' (coset weight 0), which was counted exactly per trial.
    """
    threshold = len(stats.s_qudits) * stats.p * weight_threshold_y(stats.k)
    if threshold > 1:
        raise ValueError(
            "threshold exceeds 1; per-trial weight searches are required for this instance"
        )
    return {
        "threshold": threshold,
        "frequency": stats.zero_coset_weight_trials / stats.trials,
        "kind": "exact",
    }


# --------------------------------------------------------------------------
# exhaustive soundness oracle
# --------------------------------------------------------------------------

@dataclass
class SoundnessProfile:
    """Exact minimum penalty per coset weight, up to weight_cap.

    Enumerates every non-identity Pauli word of weight <= cap in weight
    order; the first weight at which a syndrome appears is the exact coset
    weight of its error class, and the penalty is a function of the
    syndrome, so per-coset-weight minima are exact.  R(delta) is exact
    when every non-zero syndrome was reached within the cap, else an
    upper bound over the enumerated range.
    """

    n: int
    m: int
    k: int
    d: int
    weight_cap: int
    min_penalty: dict  # coset weight w -> exact min penalty
    syndromes_seen: int
    coverage_complete: bool

    def R(self, delta: float) -> float:
        """min over coset weights >= delta*n (within the profile) of penalty/m."""
        w_min = max(1, math.ceil(delta * self.n))
        pens = [p for w, p in self.min_penalty.items() if w >= w_min]
        if not pens:
            raise ValueError(f"no coset weight >= {w_min} within cap {self.weight_cap}")
        return min(pens) / self.m

    def r(self, delta: float) -> float:
        return self.R(delta) / min(self.k * delta, 1.0)

    def r_at_coset_weight(self, w: int) -> float:
        """Exact minimum r over errors of coset weight exactly w."""
        delta = w / self.n
        return (self.min_penalty[w] / self.m) / min(self.k * delta, 1.0)

    def table(self) -> list[dict]:
        rows = []
        for w in sorted(self.min_penalty):
            delta = w / self.n
            rows.append(
                {
                    "delta": delta,
                    "R": self.R(delta),
                    "r": self.r(delta),
                    "kind": "exact" if self.coverage_complete else "upper_bound",
                }
            )
        return rows

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "d": self.d,
            "weight_cap": self.weight_cap,
            "min_penalty_per_coset_weight": {
                str(w): {"kind": "exact", "value": p} for w, p in sorted(self.min_penalty.items())
            },
            "syndromes_seen": self.syndromes_seen,
            "coverage_complete": self.coverage_complete,
            "table": self.table(),
        }


def soundness_profile(
    code: StabilizerCode, weight_cap: int, guard: int = 20_000_000
) -> SoundnessProfile:
    """Brute-force soundness oracle; refuses infeasible caps with an estimate."""
    total = sum(candidates_at_weight(code.n, code.d, w) for w in range(1, weight_cap + 1))
    if total > guard:
        raise ValueError(
            f"profile enumeration of {total} candidates exceeds the guard ({guard})"
        )
    seen: dict[bytes, int] = {}
    min_penalty: dict[int, int] = {}
    for w in range(1, weight_cap + 1):
        for batch in candidate_batches(code.n, code.d, w):
            syn = code.syndrome_batch(batch)
            pens = np.count_nonzero(syn, axis=1)
            for row, pen in zip(syn, pens):
                if pen == 0:
                    continue  # centralizer element, not an error
                key = row.tobytes()
                if key not in seen:
                    seen[key] = w
                    cur = min_penalty.get(w)
                    if cur is None or pen < cur:
                        min_penalty[w] = int(pen)
    complete = len(seen) == code.d**code.rank - 1
    return SoundnessProfile(
        n=code.n,
        m=code.m,
        k=code.k,
        d=code.d,
        weight_cap=weight_cap,
        min_penalty=min_penalty,
        syndromes_seen=len(seen),
        coverage_complete=complete,
    )
