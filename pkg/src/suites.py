"""Seeded property suites over random classes, bundles and partitions."""

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional, Sequence

from sympy import Rational

from .base_loci import (
    BaseLocusResult,
    SplitBundle,
    b_minus_bundle,
    b_minus_pullback_sides,
    b_plus_bundle,
    b_plus_pullback_sides,
    direct_sum,
    l_positive_summand,
    sym_power,
    tensor,
    twist_normalize,
    v_psef,
)
from .certificates import DERIVED, STATED, VerificationCertificate, VerifyConfig, double_blowup_map
from .chern_ring import ch_split, chern_classes, exp_lc, lc, lc_add, lc_degree_two
from .lattice import SurfaceLattice
from .parsing import parse_class
from .schur import (
    h_product,
    kostka,
    num_standard_tableaux,
    partitions,
    pieri_summand_certificate,
    schur_dim,
    semistandard_tableaux,
    standard_tableaux,
    witness_exponents,
)
from .split_cohomology import SplitDegrees
from .surface_config import load_surface
from .zariski import NotPseudoeffective, zariski_decompose

logger = logging.getLogger(__name__)

ZARISKI_CASES = 200
NEGATED_CASES = 20
PERTURBATIONS = (Rational(1, 10), Rational(1, 100))
LOCI_CASES = 100
CHERN_CASES = 100
PULLBACK_DEGREES = range(-2, 6)
# Rays of the nef cone of the double blow-up
NEF_RAYS = ("L", "L-Fb-Fp", "2L-Fb-2Fp")


def run_cases(fn: Callable, cases: Sequence, config: VerifyConfig) -> list:
    """Map fn over cases, in a process pool when requested; results keep the case order."""
    if not config.parallel or len(cases) < 2:
        return [fn(case) for case in cases]
    with ProcessPoolExecutor(max_workers=config.workers) as executor:
        return list(executor.map(fn, cases, chunksize=max(1, len(cases) // 16)))


def _tally(results: list, key: str) -> int:
    return sum(1 for result in results if result[key])


def _random_rational(rng: random.Random, low: int, high: int, max_denominator: int = 3) -> Rational:
    denominator = rng.randint(1, max_denominator)
    return Rational(rng.randint(low * denominator, high * denominator), denominator)


# ----- schur -----

def _schur_checksum(case: tuple[int, int]) -> bool:
    n, r = case
    return sum(num_standard_tableaux(shape) * schur_dim(shape, r) for shape in partitions(n, r)) == r ** n


def _schur_tableaux(n: int) -> bool:
    for shape in partitions(n, n):
        if num_standard_tableaux(shape) != sum(1 for _ in standard_tableaux(shape)):
            return False
        for content in partitions(n, n):
            expected = sum(1 for _ in semistandard_tableaux(shape, content.parts))
            if kostka(shape, content.parts) != expected:
                return False
            if h_product(content.parts).get(shape, 0) != expected:
                return False
    return True


def _schur_pieri(case: tuple[int, int]) -> bool:
    n, r = case
    return all(pieri_summand_certificate(shape, r) >= 1 for shape in partitions(n, r))


def _schur_witness(case: tuple[int, int, int]) -> bool:
    M, q, m = case
    return all(witness_exponents(shape, m, q, M).holds for shape in partitions(M * q, M * q))


def schur_suite(config: Optional[VerifyConfig] = None) -> VerificationCertificate:
    config = config or VerifyConfig()
    cert = VerificationCertificate("schur-suite")

    grid = [(n, r) for n in range(1, 9) for r in range(1, 5)]
    cert.add("sum f^lambda dim_r(lambda) = r^n for n <= 8, r <= 4", len(grid),
             sum(run_cases(_schur_checksum, grid, config)), DERIVED)

    weights = list(range(1, 7))
    cert.add("hook length, Kostka and Pieri coefficients match tableau enumeration for n <= 6",
             len(weights), sum(run_cases(_schur_tableaux, weights, config)), DERIVED)

    cert.add("Pieri multiplicity >= 1 for every lambda with <= r parts, n <= 8, r <= 4", len(grid),
             sum(run_cases(_schur_pieri, grid, config)), STATED)

    triples = [(M, q, m) for M in range(1, 6) for q in range(1, 6) for m in range(1, 6)]
    cert.add("2M - m sum a_i = M + sum b_i / q >= M for M, q, m <= 5", len(triples),
             sum(run_cases(_schur_witness, triples, config)), STATED)

    logger.info("schur-suite: %s", "pass" if cert.overall else "fail")
    return cert


# ----- zariski -----

def _zariski_case(case: tuple) -> dict:
    weights, nef_weights, factor, negative = case
    x = load_surface("p2-double-blowup")
    d = x.zero()
    for weight, generator in zip(weights, x.mori_generators):
        d = d + weight * generator
    for weight, ray in zip(nef_weights, NEF_RAYS):
        d = d + weight * parse_class(ray, x)
    if negative:
        return {"psef": False, "rejected": isinstance(zariski_decompose(-d), NotPseudoeffective) or d.is_zero()}

    decomposition = zariski_decompose(d)
    if isinstance(decomposition, NotPseudoeffective):
        return {"psef": False, "invariants": False, "idempotent": False, "scaling": False, "perturbation": False}
    decomposition.check_invariants()
    again = zariski_decompose(decomposition.positive)
    scaled = zariski_decompose(factor * d)
    expected = decomposition.scaled(factor)
    perturbed = [zariski_decompose(d + epsilon * x.polarization) for epsilon in PERTURBATIONS]
    return {
        "psef": True,
        "invariants": True,
        "idempotent": again.positive == decomposition.positive and not again.negative,
        "scaling": scaled.positive == expected.positive and scaled.negative == expected.negative,
        "perturbation": all(p.support <= decomposition.support for p in perturbed),
    }


def zariski_suite(config: Optional[VerifyConfig] = None) -> VerificationCertificate:
    config = config or VerifyConfig()
    rng = random.Random(config.seed)
    x = load_surface("p2-double-blowup")
    logger.info("zariski-suite: seed %d, %d psef and %d negated cases", config.seed, ZARISKI_CASES, NEGATED_CASES)

    def draw(negative: bool) -> tuple:
        weights = tuple(_random_rational(rng, 0, 4) for _ in x.mori_generators)
        nef_weights = tuple(_random_rational(rng, 0, 2) for _ in NEF_RAYS)
        return weights, nef_weights, _random_rational(rng, 1, 5), negative

    psef_cases = [draw(False) for _ in range(ZARISKI_CASES)]
    negated_cases = [draw(True) for _ in range(NEGATED_CASES)]
    psef = run_cases(_zariski_case, psef_cases, config)
    negated = run_cases(_zariski_case, negated_cases, config)

    cert = VerificationCertificate("zariski-suite")
    cert.add("random psef classes recognised as psef", ZARISKI_CASES, _tally(psef, "psef"), DERIVED)
    cert.add("random psef classes decomposed", ZARISKI_CASES, _tally(psef, "invariants"), DERIVED)
    cert.add("P is its own Zariski decomposition", ZARISKI_CASES, _tally(psef, "idempotent"), DERIVED)
    cert.add("Zar(cD) = c Zar(D) for c > 0", ZARISKI_CASES, _tally(psef, "scaling"), DERIVED)
    cert.add("Supp N(D + eA) in Supp N(D) for e = 1/10, 1/100", ZARISKI_CASES,
             _tally(psef, "perturbation"), DERIVED)
    cert.add("negated classes are rejected as not psef", NEGATED_CASES, _tally(negated, "rejected"), DERIVED)
    logger.info("zariski-suite: %s", "pass" if cert.overall else "fail")
    return cert


# ----- base loci laws -----

def _random_class(rng: random.Random, lattice: SurfaceLattice, low: int = -2, high: int = 3):
    return lattice.divisor([rng.randint(low, high) for _ in range(lattice.rank)])


def _random_bundle(rng: random.Random, lattice: SurfaceLattice, twist=None) -> SplitBundle:
    summands = [_random_class(rng, lattice) for _ in range(rng.randint(1, 3))]
    if twist is None:
        twist = lattice.divisor([_random_rational(rng, -1, 1) for _ in range(lattice.rank)])
    return SplitBundle(tuple(summands), twist)


def _loci_case(case: tuple) -> dict:
    e, f, g, integral = case
    result = {}
    for name, locus in (("minus", b_minus_bundle), ("plus", b_plus_bundle)):
        base = locus(e)
        result[f"direct sum {name}"] = locus(direct_sum(e, f)) == base.union(locus(f))
        result[f"homogeneity {name}"] = locus(sym_power(e, 2)) == base and locus(sym_power(e, 3)) == base
        result[f"tensor {name}"] = locus(tensor(e, g)).issubset(base.union(b_minus_bundle(g)))
        result[f"twist {name}"] = locus(twist_normalize(e, integral)) == base
    result["inclusion"] = b_minus_bundle(e).issubset(b_plus_bundle(e))
    for kind, big in (("psef", False), ("big", True)):
        witness = l_positive_summand(e, big)
        result[f"L-{kind}"] = None if witness is None else all(
            c * witness in sym_power(e, c).twisted_summands() and l_positive_summand(sym_power(e, c), big) is not None
            for c in (2, 3)
        )
    return result


def loci_suite(config: Optional[VerifyConfig] = None) -> VerificationCertificate:
    config = config or VerifyConfig()
    rng = random.Random(config.seed)
    x = load_surface("p2-double-blowup")
    logger.info("loci-suite: seed %d, %d cases", config.seed, LOCI_CASES)

    cases = []
    for _ in range(LOCI_CASES):
        e = _random_bundle(rng, x)
        f = _random_bundle(rng, x, twist=e.twist)
        g = _random_bundle(rng, x)
        cases.append((e, f, g, _random_class(rng, x, -1, 1)))
    results = run_cases(_loci_case, cases, config)

    cert = VerificationCertificate("loci-suite")
    for name, label in (("minus", "B-"), ("plus", "B+")):
        cert.add(f"{label}(E + F) = {label}(E) u {label}(F)", len(results),
                 _tally(results, f"direct sum {name}"), STATED)
        cert.add(f"{label}(S^2 E) = {label}(S^3 E) = {label}(E)", len(results),
                 _tally(results, f"homogeneity {name}"), STATED)
        cert.add(f"{label}(E (x) G) in {label}(E) u B-(G)", len(results),
                 _tally(results, f"tensor {name}"), STATED)
        cert.add(f"{label}(E<T>) = {label}(E(T')<T-T'>)", len(results),
                 _tally(results, f"twist {name}"), STATED)
    cert.add("B-(E) in B+(E)", len(results), _tally(results, "inclusion"), STATED)
    for kind in ("psef", "big"):
        witnessed = [result for result in results if result[f"L-{kind}"] is not None]
        cert.add(f"an L-{kind} summand O(D)<T> of E gives the summand O(cD)<cT> of S^c E, c = 2, 3",
                 len(witnessed), _tally(witnessed, f"L-{kind}"), STATED)
    logger.info("loci-suite: %s", "pass" if cert.overall else "fail")
    return cert


# ----- pullback along X -> P^2 -----

def pullback_suite(config: Optional[VerifyConfig] = None) -> VerificationCertificate:
    _, blowdown = double_blowup_map()
    hyperplane = blowdown.target.basis_class("L")
    cert = VerificationCertificate("pullback-suite")
    cert.add("exceptional locus of X -> P^2", "{Fb, Fp}", str(BaseLocusResult.of_curves(blowdown.contracted_curves)),
             STATED)

    bundles = [SplitBundle.of([d * hyperplane]) for d in PULLBACK_DEGREES]
    bundles += [SplitBundle.of([a * hyperplane, b * hyperplane])
                for a in PULLBACK_DEGREES for b in PULLBACK_DEGREES if a <= b]
    for e in bundles:
        lhs, rhs = b_plus_pullback_sides(blowdown, e)
        cert.add(f"B+(f*{e}) = f^-1 B+({e}) u NF(f)", str(rhs), str(lhs), STATED)
        lhs, rhs = b_minus_pullback_sides(blowdown, e)
        cert.add(f"B-(f*{e}) = f^-1 B-({e})", str(rhs), str(lhs), STATED)
    logger.info("pullback-suite: %s (%d bundles)", "pass" if cert.overall else "fail", len(bundles))
    return cert


# ----- chern characters -----

def _chern_case(case: tuple) -> dict:
    e, f = case
    if isinstance(e, SplitDegrees):
        product = SplitDegrees(e.ambient_dim, tuple(a + b for a in e.degrees for b in f.degrees))
    else:
        product = tensor(e, f)
    ch_e, ch_f, ch_product = ch_split(e), ch_split(f), ch_split(product)
    return {
        "multiplicative": ch_product == ch_e * ch_f,
        "additive": lc(ch_product) == lc_add(lc(ch_e), lc(ch_f)),
        "inverse": exp_lc(lc(ch_e)) == ch_e and exp_lc(lc(ch_product)) == ch_product,
    }


def _lc_degree_two_case(case: tuple[int, int]) -> bool:
    a, b = case
    x = ch_split(SplitDegrees(2, (a, b)))
    chern = chern_classes(x)
    coefficient = lc(x).higher.part(2)[0]
    formula = lc_degree_two(2, chern.homogeneous(1), chern.homogeneous(2)).part(2)[0]
    return coefficient == Rational((a - b) ** 2, 8) == formula


def chern_suite(config: Optional[VerifyConfig] = None) -> VerificationCertificate:
    config = config or VerifyConfig()
    rng = random.Random(config.seed)
    x = load_surface("p2-double-blowup")
    logger.info("chern-suite: seed %d, %d cases", config.seed, CHERN_CASES)

    cases = []
    for index in range(CHERN_CASES):
        if index % 2 == 0:
            cases.append(tuple(
                SplitDegrees(2, tuple(rng.randint(-3, 3) for _ in range(rng.randint(1, 3))))
                for _ in range(2)
            ))
        else:
            cases.append((_random_bundle(rng, x), _random_bundle(rng, x)))
    results = run_cases(_chern_case, cases, config)

    cert = VerificationCertificate("chern-suite")
    cert.add("ch(E (x) F) = ch(E) ch(F) on P^2 and X", len(results), _tally(results, "multiplicative"), STATED)
    cert.add("lc(E (x) F) = lc(E) + lc(F)", len(results), _tally(results, "additive"), STATED)
    cert.add("exp_lc(lc(x)) = x", len(results), _tally(results, "inverse"), DERIVED)

    pairs = [(a, b) for a in range(-3, 4) for b in range(-3, 4)]
    cert.add("degree-2 lc of O(a)+O(b) is (a-b)^2/8 and matches the Chern class formula", len(pairs),
             sum(run_cases(_lc_degree_two_case, pairs, config)), DERIVED)

    twisted = SplitDegrees(1, (1, -1))
    trivial = SplitDegrees(1, (0, 0))
    cert.add("ch(O(1)+O(-1)) = ch(O+O) on P^1", True, ch_split(twisted) == ch_split(trivial), STATED)
    cert.add("O+O is V-psef on P^1", True, v_psef(trivial.to_bundle()), STATED)
    cert.add("O(1)+O(-1) is not V-psef on P^1", False, v_psef(twisted.to_bundle()), STATED)
    cert.add("O(1)+O(-1) is L-psef on P^1 through the summand O(1)", True,
             l_positive_summand(twisted.to_bundle()) is not None, DERIVED)

    logger.info("chern-suite: %s", "pass" if cert.overall else "fail")
    return cert
