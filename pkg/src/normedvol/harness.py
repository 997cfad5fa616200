"""Numerical verification suites for the extremal values, the A_d(k)
minimization, and the random search on ``λ(Q_6(B)) λ(B°) >= 8``."""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import bodies
from .extremal import (
    DEFAULT_BUDGET,
    SolverBudget,
    max_cross_polytope,
    max_inscribed_ngon_disk,
    max_inscribed_polytope,
)
from .geometry import GeometryError, Polytope, central_symmetral, convex_hull, linear_image, polar, volume
from .shadow import (
    ShadowSystem,
    mr_profile,
    projection_cascade,
    random_system,
    symmetral_system,
    volume_profile,
)
from .volumes import VolumeKind, mu, unit_ball_volume

log = logging.getLogger(__name__)

RNG_NAME = f"numpy.random.Philox+SeedSequence (numpy {np.__version__})"


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Counter-based generator for stream ``key`` under ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


def derive_seed(seed: int, *key: int) -> int:
    return int(np.random.SeedSequence(seed, spawn_key=key).generate_state(1, np.uint64)[0])


@dataclass
class VerificationReport:
    claim_id: str
    computed: float
    expected: float
    tol: float
    witness_path: str | None = None
    rel_err: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.computed = float(self.computed)
        self.expected = float(self.expected)
        self.rel_err = abs(self.computed - self.expected) / max(abs(self.expected), 1.0)
        self.passed = bool(self.rel_err <= self.tol)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag}  {self.claim_id:<40s} computed={self.computed:.12g} "
                f"expected={self.expected:.12g} rel_err={self.rel_err:.3g} tol={self.tol:g}")


def _excess(values: Iterable[float], bound: float, relative=True) -> float:
    """How far the largest value rises above ``bound`` (0 if it never does)."""
    worst = max(values)
    ex = max(0.0, worst - bound)
    return ex / abs(bound) if relative else ex


def _shortfall(values: Iterable[float], bound: float) -> float:
    return max(0.0, bound - min(values))


# -- combinatorics ---------------------------------------------------------------

def a_d(d: int, k: int) -> int:
    return math.comb(k, k // 2) * math.comb(d - k, (d - k) // 2)


def a_d_table(d: int):
    """``([A_d(1), ..., A_d(floor(d/2))], argmin set)`` in exact integers."""
    if d < 3:
        raise ValueError("d must be at least 3")
    vals = [a_d(d, k) for k in range(1, d // 2 + 1)]
    lo = min(vals)
    return vals, {k for k, v in enumerate(vals, start=1) if v == lo}


def lemma_minimizers(d: int):
    """Minimizing k and minimum value as predicted from ``d = 4m + r``."""
    m, r = divmod(d, 4)
    if r == 0:
        return {2 * m - 1}, math.comb(2 * m - 1, m - 1) * math.comb(2 * m + 1, m)
    if r == 1:
        return {2 * m - 1, 2 * m}, math.comb(2 * m, m) * math.comb(2 * m + 1, m)
    return {2 * m + 1}, math.comb(2 * m + 1, m) * math.comb(2 * m + r - 1, m + r - 2)


def verify_combinatorics(d_max: int = 40, **_) -> list:
    out = []
    for d in range(3, d_max + 1):
        vals, argmin = a_d_table(d)
        ks, value = lemma_minimizers(d)
        ok = argmin == ks and min(vals) == value
        out.append(VerificationReport(f"lem2.8:d={d}", 0 if ok else 1, 0, 0.0))
    return out


# -- Busemann ----------------------------------------------------------------------

def bus_pair_dims(d: int):
    """(k, denominator) of the extremal simplex pair for ``n = d + 2``."""
    m, r = divmod(d, 4)
    k = 2 * m + 1
    if r <= 1:
        denom = math.comb(2 * m + 1, m) * math.comb(2 * m + r - 1, m)
    else:
        denom = math.comb(2 * m + 1, m) * math.comb(2 * m + r - 1, m + 1)
    return k, denom


def _mu_exact(B, n, kind, budget):
    res = mu(B, n, kind, budget)
    if not res.exact:
        raise RuntimeError(f"solver was not exhaustive for n={n}; raise the budget")
    return res.value


def verify_bus_max(d: int, budget: SolverBudget = DEFAULT_BUDGET, trials: int = 20,
                   seed: int = 0, scale: float = 0.05, tol: float = 1e-6) -> list:
    if not 3 <= d <= 5:
        raise ValueError("d must be in 3..5")
    kd = unit_ball_volume(d)
    out = []
    S = bodies.simplex_symmetral(d)
    ref_a = _mu_exact(S, d + 1, VolumeKind.BUSEMANN, budget)
    out.append(VerificationReport(f"thm2.4a:d={d}", ref_a, kd / math.comb(d, d // 2), tol))
    k, denom = bus_pair_dims(d)
    P = bodies.simplex_pair_body(d, k)
    ref_b = _mu_exact(P, d + 2, VolumeKind.BUSEMANN, budget)
    part = "b" if d % 4 <= 1 else "c"
    out.append(VerificationReport(f"thm2.4{part}:d={d}:k={k}", ref_b, kd / denom, tol))
    out.append(VerificationReport(f"lem2.8:d={d}:A_d", min(a_d_table(d)[0]), denom, 0.0))
    for label, body, n, ref in (("a", S, d + 1, ref_a), (part, P, d + 2, ref_b)):
        rng = make_rng(seed, d, ord(label))
        vals = [_mu_exact(bodies.perturb_symmetric(body, rng, scale), n, VolumeKind.BUSEMANN, budget)
                for _ in range(trials)]
        out.append(VerificationReport(f"thm2.4{label}:d={d}:perturb-excess", _excess(vals, ref), 0.0, tol))
    return out


def verify_bus_planar(samples: int = 50, seed: int = 0, budget=DEFAULT_BUDGET) -> list:
    out = [VerificationReport("rem2.3:hexagon", _mu_exact(bodies.regular_ngon(6), 3, "bus", budget),
                              math.pi / 2, 1e-9)]
    rng = make_rng(seed, 23)
    worst = 0.0
    for _ in range(samples):
        T = bodies.random_triangle_containing_origin(rng)
        worst = max(worst, abs(volume(central_symmetral(T)) / (2 * volume(T)) - 1))
    out.append(VerificationReport("rem2.3:random-triangles", worst, 0.0, 1e-9))
    # the doubling identity holds exactly when o lies in the medial triangle
    worst = 0.0
    for _ in range(samples):
        T = bodies.random_triangle_with_origin_in_medial(rng)
        worst = max(worst, abs(volume(central_symmetral(T)) / (2 * volume(T)) - 1))
    out.append(VerificationReport("rem2.3:medial-triangles", worst, 0.0, 1e-9))
    return out


def double_simplex_volume(S1: np.ndarray, S2: np.ndarray, x1, x2) -> float:
    """``V(x1, x2)`` for simplices already embedded in R^d."""
    pts = np.vstack([x1 + S1, x2 + S2])
    return volume(convex_hull(np.vstack([pts, -pts])))


def embedded_simplices(d: int, k: int):
    s1 = bodies.simplex_vertices(k)
    s2 = bodies.simplex_vertices(d - k)
    return (np.hstack([s1, np.zeros((k + 1, d - k))]),
            np.hstack([np.zeros((d - k + 1, k)), s2]))


def reflection_system(S1, S2, x1, x2, edge_of=0) -> ShadowSystem:
    """The system ``K(t)`` for the bisector of the first edge of S1 (or S2)."""
    S = S1 if edge_of == 0 else S2
    v = S[0] - S[1]
    v = v / np.linalg.norm(v)
    lam1, lam2 = float(x1 @ v), float(x2 @ v)
    p1, p2 = x1 - lam1 * v, x2 - lam2 * v
    base = np.vstack([p1 + S1, p2 + S2, -p1 - S1, -p2 - S2])
    speeds = np.concatenate([np.full(len(S1), lam1), np.full(len(S2), lam2),
                             np.full(len(S1), -lam1), np.full(len(S2), -lam2)])
    return ShadowSystem(base, speeds, v)


# -- Holmes-Thompson ------------------------------------------------------------------

def verify_ht_plane(n_list=(4, 6, 8), budget: SolverBudget = DEFAULT_BUDGET, samples: int = 100,
                    seed: int = 0, tol: float = 1e-6) -> list:
    out = []
    for n in n_list:
        if n % 2 or n < 4:
            raise ValueError("n must be even and >= 4")
        val = _mu_exact(bodies.regular_ngon(n), n, "ht", budget)
        out.append(VerificationReport(f"thm3.1(1):n={n}", val, n * n / math.pi * math.sin(math.pi / n) ** 2, 1e-9))
    out.append(VerificationReport("thm3.1(2):hexagon", _mu_exact(bodies.regular_ngon(6), 4, "ht", budget),
                                  6 / math.pi, 1e-9))
    out.append(VerificationReport("thm3.1(2):square", _mu_exact(bodies.cube(2), 4, "ht", budget),
                                  8 / math.pi, 1e-9))
    rng = make_rng(seed, 31)
    vals = [_mu_exact(bodies.random_symmetric_polygon(rng), 4, "ht", budget) for _ in range(samples)]
    out.append(VerificationReport("thm3.1(2):random-floor", _shortfall(vals, 6 / math.pi), 0.0, tol))
    return out


def verify_ht_simplex_local(d: int = 3, trials: int = 50, budget: SolverBudget = DEFAULT_BUDGET,
                            scale: float = 0.05, seed: int = 0, tol: float = 1e-4) -> list:
    if d != 3:
        raise ValueError("only d = 3 is supported")
    B = bodies.simplex_symmetral(d)
    ref = _mu_exact(B, d + 1, "ht", budget)
    out = [VerificationReport(f"thm3.6:d={d}:reference", ref, ref, 0.0)]
    out.append(VerificationReport(f"thm3.6:d={d}:zero-perturbation",
                                  _mu_exact(bodies.perturb_symmetric(B, make_rng(seed, 0), 0.0), d + 1, "ht", budget),
                                  ref, 1e-12))
    rng = make_rng(seed, 36)
    vals = [_mu_exact(bodies.perturb_symmetric(B, rng, scale), d + 1, "ht", budget) for _ in range(trials)]
    out.append(VerificationReport(f"thm3.6:d={d}:perturb-excess", _excess(vals, ref), 0.0, tol))
    return out


# -- mass ------------------------------------------------------------------------------

def mass_star_n_prime(n: int) -> int:
    """Largest n' <= n with n' = 2 mod 4."""
    return n - ((n - 2) % 4)


def m_plane_max_mass_oracle(n: int, budget: SolverBudget = DEFAULT_BUDGET) -> float:
    """Mass of a largest inscribed n-gon of the regular n'-gon, by enumeration."""
    if n % 2 or n < 6:
        raise ValueError("n must be even and >= 6")
    B = bodies.regular_ngon(mass_star_n_prime(n))
    Q = max_inscribed_polytope(B, n, budget)
    I = max_cross_polytope(B, budget)
    if not (Q.exact and I.exact):
        raise RuntimeError("oracle requires exhaustive solvers")
    return 2 * Q.value / I.value


def verify_mass(budget: SolverBudget = DEFAULT_BUDGET, samples: int = 100, seed: int = 0,
                tol: float = 1e-6) -> list:
    sq = bodies.cube(2)
    rng = make_rng(seed, 41)
    para = linear_image(sq, bodies.random_linear_map(rng, 2))
    out = [VerificationReport("thm4.1(1):square:n=3", _mu_exact(sq, 3, "mass", budget), 1.0, 1e-9),
           VerificationReport("thm4.1(1):parallelogram:n=3", _mu_exact(para, 3, "mass", budget), 1.0, 1e-9)]
    for n in (4, 5, 6):
        out.append(VerificationReport(f"thm4.1(2):parallelogram:n={n}", _mu_exact(para, n, "mass", budget), 2.0, 1e-9))
    vals = [_mu_exact(bodies.random_symmetric_polygon(rng), 4, "mass", budget) for _ in range(samples)]
    worst = max(abs(v - 2.0) for v in vals)
    out.append(VerificationReport("thm4.1(3):random:n=4:max-deviation", worst, 0.0, 1e-7))
    for d in (3, 4):
        X = bodies.cross_polytope(d)
        for n in range(d + 1, 2 * d + 2):
            if n >= 2 * d:
                expected = 2 ** d / math.factorial(d)
                tag = "thm4.4(1)"
            else:
                expected = 2 ** d / (math.factorial(d) * 2 ** (2 * d - n))
                tag = "thm4.4(2)"
            out.append(VerificationReport(f"{tag}:d={d}:n={n}", _mu_exact(X, n, "mass", budget), expected, 1e-9))
    for n in (6, 8, 10):
        npr = mass_star_n_prime(n)
        out.append(VerificationReport(f"thm4.1(4):oracle:n={n}", m_plane_max_mass_oracle(n, budget),
                                      npr * math.sin(math.pi / npr), 1e-9))
    return out


def verify_mass_star(budget: SolverBudget = DEFAULT_BUDGET, samples: int = 100, seed: int = 0,
                     tol: float = 1e-6) -> list:
    sq = bodies.cube(2)
    out = [VerificationReport("thm5.1(1):square:n=3", _mu_exact(sq, 3, "mass-star", budget), 2.0, 1e-9)]
    for n in (4, 5, 6):
        out.append(VerificationReport(f"thm5.1(2):square:n={n}", _mu_exact(sq, n, "mass-star", budget), 4.0, 1e-9))
    out.append(VerificationReport("thm5.1(3):radon-hexagon:n=4",
                                  _mu_exact(bodies.radon_hexagon(), 4, "mass-star", budget), 2.0, 1e-9))
    rng = make_rng(seed, 51)
    vals = [_mu_exact(bodies.random_symmetric_polygon(rng), 4, "mass-star", budget) for _ in range(samples)]
    out.append(VerificationReport("thm5.1(3):random-floor", _shortfall(vals, 2.0), 0.0, tol))
    out.append(VerificationReport("rem5.2:random-ceiling", _excess(vals, 4.0, relative=False), 0.0, 1e-9))
    for d in (2, 3):
        # the cube's parallelotope search is heuristic in d >= 3, so skip the exactness gate
        res = mu(bodies.cube(d), 2 ** d, "mass-star", budget)
        out.append(VerificationReport(f"rem5.2:cube:d={d}", res.value, 2.0 ** d, 1e-9))
    return out


# -- shadow systems -----------------------------------------------------------------------

def verify_shadow(seed: int = 0, n_systems: int = 100, n_mr: int = 20, n_cascade: int = 20,
                  budget: SolverBudget = DEFAULT_BUDGET, **_) -> list:
    out = []
    rng = make_rng(seed, 26)
    fails = 0
    for i in range(n_systems):
        ss = random_system(rng, 2 + i % 2)
        fails += not volume_profile(ss, -1.0, 1.0, 201, 1e-8).passed
    out.append(VerificationReport("lem2.6:random-systems:failures", fails, 0, 0.0))

    rng = make_rng(seed, 34)
    fails = 0
    for _ in range(n_mr):
        ss = random_system(rng, 2)
        fails += not mr_profile(ss, -1.0, 1.0, 41, 1e-6, budget).passed
    out.append(VerificationReport("lem3.4:random-systems:failures", fails, 0, 0.0))

    for d in (3, 4):
        v = make_rng(seed, 240, d).standard_normal(d)
        rep = volume_profile(symmetral_system(bodies.simplex_vertices(d), v), -1.0, 1.0, 201, 1e-8)
        f0 = rep.values[len(rep.grid) // 2]
        out.append(VerificationReport(f"thm2.4a:symmetral-family:d={d}:min-at-0",
                                      (f0 - rep.values.min()) / f0, 0.0, 1e-12))

    rng = make_rng(seed, 27)
    fails = 0
    for i in range(n_cascade):
        d = 2 + i % 2
        while True:
            N = rng.standard_normal((d + 1, d))
            if np.linalg.matrix_rank(N) == d:
                break
        X = rng.standard_normal((5, d))
        f0 = float(np.linalg.norm(X, axis=1).sum())
        res = projection_cascade(N, X, 1e-6 * f0, 10_000)
        mono = all(b < a for a, b in zip(res.trace, res.trace[1:]))
        fails += not (res.reached and mono)
    out.append(VerificationReport("lem2.7:cascade:failures", fails, 0, 0.0))

    rng = make_rng(seed, 28)
    for d, k in ((3, 1), (4, 1), (4, 2)):
        S1, S2 = embedded_simplices(d, k)
        v00 = double_simplex_volume(S1, S2, 0, 0)
        worst = 0.0
        refl = 0.0
        for _ in range(100):
            x1, x2 = 0.5 * rng.standard_normal(d), 0.5 * rng.standard_normal(d)
            worst = max(worst, (v00 - double_simplex_volume(S1, S2, x1, x2)) / v00)
        for _ in range(10):
            x1, x2 = 0.5 * rng.standard_normal(d), 0.5 * rng.standard_normal(d)
            ss = reflection_system(S1, S2, x1, x2)
            for t in (0.3, 1.0):
                a = volume(convex_hull(ss.points(t)))
                b = volume(convex_hull(ss.points(-t)))
                refl = max(refl, abs(a - b) / a)
        out.append(VerificationReport(f"thm2.4:V-min-at-origin:d={d}:k={k}", max(worst, 0.0), 0.0, 1e-9))
        out.append(VerificationReport(f"thm2.4:K(t)-reflection:d={d}:k={k}", refl, 0.0, 1e-9))
    return out


def verify_macbeath(samples: int = 50, seed: int = 0, budget: SolverBudget = DEFAULT_BUDGET, **_) -> list:
    out = []
    for n in range(3, 9):
        out.append(VerificationReport(f"rem2.1:disk:n={n}", max_inscribed_ngon_disk(n), n / 2 * math.sin(2 * math.pi / n), 1e-8))
    rng = make_rng(seed, 21)
    polys = [bodies.random_symmetric_polygon(rng) for _ in range(samples)]
    for n in (4, 5, 6):
        floor = n / 2 * math.sin(2 * math.pi / n)
        vals = [max_inscribed_polytope(B, n, budget).value for B in polys]
        out.append(VerificationReport(f"rem2.1:random-floor:n={n}", _shortfall(vals, floor), 0.0, 1e-6))
    return out


# -- conjecture search ------------------------------------------------------------------------

@dataclass
class SearchRecord:
    sample_id: int
    seed: int
    generator_params: dict
    area_q6: float
    area_polar: float
    product: float
    margin: float
    body_hash: str
    body: Polytope | None = field(default=None, repr=False)

    CSV_COLUMNS = ("sample_id", "seed", "k_dirs", "area_Q6", "area_polar", "product", "margin", "body_hash")

    def csv_row(self):
        return [self.sample_id, self.seed, self.generator_params.get("k_dirs", ""),
                repr(self.area_q6), repr(self.area_polar), repr(self.product), repr(self.margin),
                self.body_hash]


DEFAULT_SEARCH_PARAMS = {"k_min": 3, "k_max": 8, "r_min": 0.5, "r_max": 2.0, "area": math.pi}


def _record(sample_id, seed, params, B, budget):
    Q = max_inscribed_polytope(B, 6, budget)
    if not Q.exact:
        raise RuntimeError("Q6 search was not exhaustive")
    ap = volume(polar(B))
    product = Q.value * ap
    return SearchRecord(sample_id, seed, params, Q.value, ap, product, product - 8.0,
                        B.content_hash[:16], B)


@dataclass
class SearchResult:
    minimum: SearchRecord
    records: list
    counterexamples: list
    skipped: int


def conjecture_search(samples: int, seed: int, generator_params: dict | None = None,
                      csv_stream=None, budget: SolverBudget = DEFAULT_BUDGET,
                      flag_below: float = -1e-6) -> SearchResult:
    """Random symmetric polygons, minimizing ``λ(Q_6(B)) λ(B°)``.

    Sample 0 is a square control (product 8). Records are written to
    ``csv_stream`` in sample order as they are produced.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    params = dict(DEFAULT_SEARCH_PARAMS, **(generator_params or {}))
    writer = None
    if csv_stream is not None:
        writer = csv.writer(csv_stream, lineterminator="\n")
        writer.writerow(SearchRecord.CSV_COLUMNS)
    side = math.sqrt(params["area"]) / 2
    control = bodies.cube(2)
    control = convex_hull(control.vertices * side)
    records, flagged, skipped = [], [], 0
    for sid in range(samples):
        if sid == 0:
            rec = _record(0, seed, {"k_dirs": 2, "control": "square"}, control, budget)
        else:
            s = derive_seed(seed, sid)
            rng = np.random.Generator(np.random.Philox(s))
            k = int(rng.integers(params["k_min"], params["k_max"] + 1))
            try:
                B = bodies.random_symmetric_polygon(rng, k=k, radii=(params["r_min"], params["r_max"]),
                                                    area=params["area"])
                rec = _record(sid, s, {"k_dirs": k}, B, budget)
            except GeometryError as exc:
                log.warning("sample %d skipped: %s", sid, exc)
                skipped += 1
                continue
        records.append(rec)
        if writer is not None:
            writer.writerow(rec.csv_row())
        if rec.margin < flag_below:
            flagged.append(rec)
    best = min(records, key=lambda r: (r.product, r.sample_id))
    return SearchResult(best, records, flagged, skipped)


# -- suites -------------------------------------------------------------------------------

def _suite_bus_max(tol, budget, seed):
    out = []
    for d in (3, 4):
        out += verify_bus_max(d, budget, seed=seed, tol=tol)
    return out


SUITES: dict[str, Callable] = {
    "bus-max": _suite_bus_max,
    "bus-plane": lambda tol, budget, seed: verify_bus_planar(seed=seed, budget=budget),
    "ht-plane": lambda tol, budget, seed: verify_ht_plane((4, 6, 8), budget, seed=seed, tol=tol),
    "mass": lambda tol, budget, seed: verify_mass(budget, seed=seed, tol=tol),
    "mass-star": lambda tol, budget, seed: verify_mass_star(budget, seed=seed, tol=tol),
    "ht-simplex": lambda tol, budget, seed: verify_ht_simplex_local(3, 50, budget, seed=seed),
    "combinatorics": lambda tol, budget, seed: verify_combinatorics(40),
    "shadow": lambda tol, budget, seed: verify_shadow(seed=seed, budget=budget),
    "macbeath": lambda tol, budget, seed: verify_macbeath(seed=seed, budget=budget),
}


def run_suite(name: str, tol: float = 1e-6, budget: SolverBudget = DEFAULT_BUDGET, seed: int = 0) -> list:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return SUITES[name](tol, budget, seed)
