"""Property check suites behind the command line and the acceptance tests.

Every suite generates serializable case records, evaluates each with a shared
evaluator, and keeps the failing records; ``replay_failure`` re-runs a stored
record through the same evaluator, so every reported counterexample can be
reproduced from its own dump.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import generate as gen
from .extend import EmbeddingInstance, NotEmbedded, extend_qpm, non_extendability_witness
from .extend import embedding_suite as run_embedding_suite
from .formats import (
    space_from_dict,
    space_to_dict,
    topology_from_dict,
    topology_to_dict,
)
from .graev import (
    Scheme,
    abelian_norm_matching,
    abelian_norm_oracle,
    decompose_abelian,
    enumerate_abelian_schemes,
    enumerate_schemes,
    graev_dist,
    graev_dist_abelian,
    norm_dp,
    norm_oracle,
    scheme_factorization,
)
from .qpspace import extend_metric, frink_metrize, sandwich_holds
from .quniform import Entourage, EntourageChain, chain_product_check, fine_quniformity
from .words import AbelianWord, Word, abelianize, invert, multiply, parse_word


class UnknownSuite(ValueError):
    pass


@dataclass
class Report:
    suite: str
    seed: int
    params: dict
    cases: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "params": self.params,
            "cases": self.cases,
            "passed": self.passed,
            "failures": self.failures,
            "notes": self.notes,
        }

    def record(self, case: dict) -> None:
        self.cases += 1
        details = evaluate_case(case)
        if details is not None:
            self.failures.append({"case": case, "details": details})


def _space(case: dict):
    return space_from_dict(case["space"])


def _word(case: dict, key: str, space) -> Word:
    return parse_word(case[key], space.labels)


def _abelian(case: dict, key: str) -> AbelianWord:
    return AbelianWord({int(k): int(v) for k, v in case[key].items()})


def _coeff_map(h: AbelianWord) -> dict[str, int]:
    return {str(pid): c for pid, c in h.items}


def _eval_dp_vs_oracle(case: dict):
    space = _space(case)
    word = _word(case, "word", space)
    expected = norm_oracle(word, space).value
    got = norm_dp(word, space)
    if expected != got:
        return {"oracle": str(expected), "dp": str(got)}
    return None


def _eval_matching_vs_oracle(case: dict):
    space = _space(case)
    h = _abelian(case, "abelian")
    expected = abelian_norm_oracle(h, space).value
    got = abelian_norm_matching(h, space)
    if expected != got:
        return {"oracle": str(expected), "matching": str(got)}
    return None


def _eval_prenorm(case: dict):
    space = _space(case)
    g = _word(case, "g", space)
    h = _word(case, "h", space)
    identity = norm_dp(Word(), space)
    if identity != 0:
        return {"property": "identity", "norm": str(identity)}
    ng, nh = norm_dp(g, space), norm_dp(h, space)
    ngh = norm_dp(multiply(g, h), space)
    if ngh > ng + nh:
        return {
            "property": "subadditive",
            "norm_g": str(ng),
            "norm_h": str(nh),
            "norm_gh": str(ngh),
        }
    return None


def _eval_invariance(case: dict):
    space = _space(case)
    g = _word(case, "g", space)
    w = _word(case, "w", space)
    inner = norm_dp(g, space)
    conj = norm_dp(multiply(multiply(w, g), invert(w)), space)
    if inner != conj:
        return {"norm": str(inner), "conjugated": str(conj)}
    return None


def _eval_restriction(case: dict):
    space = _space(case)
    for x in range(space.size):
        for y in range(space.size):
            expected = space.value(x, y)
            gx, gy = Word([x + 1]), Word([y + 1])
            ax, ay = AbelianWord({x: 1}), AbelianWord({y: 1})
            values = {
                "dp": graev_dist(gx, gy, space),
                "oracle": norm_oracle(multiply(invert(gx), gy), space).value,
                "matching": graev_dist_abelian(ax, ay, space),
                "abelian_oracle": abelian_norm_oracle(ay - ax, space).value,
            }
            bad = {k: str(v) for k, v in values.items() if v != expected}
            if bad:
                return {"pair": [space.labels[x], space.labels[y]], "expected": str(expected), **bad}
    return None


def _eval_contraction(case: dict):
    space = _space(case)
    g = _word(case, "g", space)
    free = norm_dp(g, space)
    abelian = abelian_norm_matching(abelianize(g), space)
    if abelian > free:
        return {"free": str(free), "abelian": str(abelian)}
    return None


def _rebuild_chain(case: dict) -> EntourageChain:
    n = case["points"]
    return EntourageChain(
        [Entourage(n, [tuple(p) for p in level]) for level in case["levels"]]
    )


def _eval_frink(case: dict):
    chain = _rebuild_chain(case)
    rho = frink_metrize(chain)
    if not sandwich_holds(chain, rho):
        return {"property": "sandwich"}
    return None


def _eval_lemma2(case: dict):
    space = _space(case)
    h = _abelian(case, "abelian")
    record = decompose_abelian(h, space)
    expected = abelian_norm_oracle(h, space).value
    if record.value != expected:
        return {"oracle": str(expected), "decomposition": str(record.value)}
    star = extend_metric(space)
    star_sum = sum(star.value(u, v) for u, v in record.pairs)
    if star_sum != expected:
        return {"property": "letter-pair sum", "sum": str(star_sum), "oracle": str(expected)}
    if expected < 1:
        if record.point_pairs is None:
            return {"property": "point form missing below 1"}
        point_sum = sum(space.value(y, z) for y, z in record.point_pairs)
        if point_sum != expected:
            return {"property": "point-pair sum", "sum": str(point_sum), "oracle": str(expected)}
    elif record.point_pairs is not None:
        return {"property": "unexpected point form at norm >= 1"}
    return None


def _eval_lemma3(case: dict):
    if case["group"] == "cyclic":
        table = gen.cyclic_table(case["order"])
    elif case["group"] == "symmetric":
        table = gen.symmetric_table(case["order"])
    else:
        raise UnknownSuite(f"unknown group kind {case['group']!r}")
    ok = chain_product_check(table, case["subsets"], case["k"], case["r"])
    if not ok:
        return {"property": "product containment"}
    return None


def _eval_lemma4(case: dict):
    word = Word(case["letters"])
    scheme = Scheme(len(case["letters"]) // 2, [tuple(p) for p in case["scheme"]])
    indices, conjugators = scheme_factorization(word, scheme)
    product = Word()
    for i, conj in zip(indices, conjugators):
        pair = Word((word.letters[i - 1], word.letters[scheme.partner(i) - 1]))
        product = multiply(product, multiply(multiply(conj, pair), invert(conj)))
    if product != word:
        return {"property": "product identity"}
    covered = sorted(set(indices) | {scheme.partner(i) for i in indices})
    if covered != list(range(1, len(case["letters"]) + 1)):
        return {"property": "index partition"}
    return None


def _eval_catalan(case: dict):
    n = case["n"]
    if case["kind"] == "scheme":
        expected = _catalan(n)
        got = sum(1 for _ in enumerate_schemes(n))
    else:
        expected = _double_factorial(2 * n - 1)
        got = sum(1 for _ in enumerate_abelian_schemes(n))
    if expected != got:
        return {"expected": expected, "got": got}
    return None


def _catalan(n: int) -> int:
    counts = [1]
    for _ in range(n):
        counts.append(sum(counts[i] * counts[-1 - i] for i in range(len(counts))))
    return counts[n]


def _double_factorial(n: int) -> int:
    return 1 if n <= 1 else n * _double_factorial(n - 2)


def _eval_embedding(case: dict):
    space = topology_from_dict(case["space"])
    index = {label: i for i, label in enumerate(space.labels)}
    subset = sorted(index[l] for l in case["subset"])
    subset_space = (
        topology_from_dict(case["subset_topology"]) if "subset_topology" in case else None
    )
    report = run_embedding_suite(
        space, subset, case["trials"], seed=case["seed"], subset_space=subset_space
    )
    if case["expect"] == "embedded":
        if not report["subspace_check"]:
            return {"property": "subspace check"}
        bad = [t for t in report["trials"] if t["status"] != "extended"]
        if bad:
            return {"property": "exact extension", "trial": bad[0]}
        return None
    if report["subspace_check"]:
        return {"property": "expected failing trace check"}
    witness = non_extendability_witness(space, subset, subset_space)
    if witness is None:
        return {"property": "witness missing"}
    e_x = fine_quniformity(subset_space).generator
    if any(witness.value(a, b) != 0 for a, b in e_x.pairs):
        return {"property": "witness not quasi-uniform on the subset"}
    try:
        extend_qpm(EmbeddingInstance(space, subset, witness, subset_space))
        return {"property": "extension unexpectedly succeeded"}
    except NotEmbedded:
        return None


_EVALUATORS = {
    "dp_vs_oracle": _eval_dp_vs_oracle,
    "matching_vs_oracle": _eval_matching_vs_oracle,
    "prenorm": _eval_prenorm,
    "invariance": _eval_invariance,
    "restriction": _eval_restriction,
    "contraction": _eval_contraction,
    "frink": _eval_frink,
    "lemma2": _eval_lemma2,
    "lemma3": _eval_lemma3,
    "lemma4": _eval_lemma4,
    "catalan": _eval_catalan,
    "embedding": _eval_embedding,
}


def evaluate_case(case: dict):
    """Run one stored case; None means it passes, a dict describes the failure."""
    return _EVALUATORS[case["check"]](case)


def replay_failure(failure: dict):
    """Re-run a reported failure from its dump; returns the fresh details."""
    return evaluate_case(failure["case"])


def _reduced_words(n_points: int, max_len: int):
    alphabet = [i + 1 for i in range(n_points)] + [-(i + 1) for i in range(n_points)]

    def grow(prefix: tuple[int, ...]):
        yield Word(prefix)
        if len(prefix) == max_len:
            return
        for a in alphabet:
            if prefix and prefix[-1] == -a:
                continue
            yield from grow(prefix + (a,))

    yield from grow(())


def _abelian_vectors(n_points: int, max_len: int):
    def grow(prefix: tuple[int, ...], budget: int):
        if len(prefix) == n_points:
            yield AbelianWord(dict(enumerate(prefix)))
            return
        for c in range(-budget, budget + 1):
            yield from grow(prefix + (c,), budget - abs(c))

    yield from grow((), max_len)


def check_dp_vs_oracle(
    seed: int,
    max_x: int = 3,
    max_len: int = 6,
    trials: int = 500,
    trial_points: int = 4,
    trial_len: int = 8,
) -> Report:
    params = dict(
        max_x=max_x,
        max_len=max_len,
        trials=trials,
        trial_points=trial_points,
        trial_len=trial_len,
    )
    report = Report("dp-vs-oracle", seed, params)
    rng = random.Random(seed)
    for k in range(1, max_x + 1):
        space = space_to_dict(gen.random_qpm(rng, k))
        labels = space["points"]
        for word in _reduced_words(k, max_len):
            report.record(
                {"check": "dp_vs_oracle", "space": space, "word": word.tokens(labels)}
            )
    for _ in range(trials):
        k = rng.randint(1, trial_points)
        space = gen.random_qpm(rng, k)
        word = gen.random_reduced_word(rng, k, rng.randint(1, trial_len))
        report.record(
            {
                "check": "dp_vs_oracle",
                "space": space_to_dict(space),
                "word": word.tokens(space.labels),
            }
        )
    return report


def check_matching_vs_oracle(
    seed: int,
    max_x: int = 3,
    max_len: int = 6,
    trials: int = 500,
    trial_points: int = 4,
    trial_len: int = 8,
) -> Report:
    params = dict(
        max_x=max_x,
        max_len=max_len,
        trials=trials,
        trial_points=trial_points,
        trial_len=trial_len,
    )
    report = Report("matching-vs-oracle", seed, params)
    rng = random.Random(seed)
    for k in range(1, max_x + 1):
        space = space_to_dict(gen.random_qpm(rng, k))
        for h in _abelian_vectors(k, max_len):
            report.record(
                {"check": "matching_vs_oracle", "space": space, "abelian": _coeff_map(h)}
            )
    for _ in range(trials):
        k = rng.randint(1, trial_points)
        space = gen.random_qpm(rng, k)
        h = gen.random_abelian(rng, k, trial_len)
        report.record(
            {
                "check": "matching_vs_oracle",
                "space": space_to_dict(space),
                "abelian": _coeff_map(h),
            }
        )
    return report


def check_prenorm(seed: int, trials: int = 1000, points: int = 3, max_len: int = 6) -> Report:
    report = Report("prenorm", seed, dict(trials=trials, points=points, max_len=max_len))
    rng = random.Random(seed)
    for _ in range(trials):
        k = rng.randint(1, points)
        space = gen.random_qpm(rng, k)
        g = gen.random_reduced_word(rng, k, rng.randint(0, max_len))
        h = gen.random_reduced_word(rng, k, rng.randint(0, max_len))
        report.record(
            {
                "check": "prenorm",
                "space": space_to_dict(space),
                "g": g.tokens(space.labels),
                "h": h.tokens(space.labels),
            }
        )
    return report


def check_invariance(
    seed: int, trials: int = 1000, points: int = 3, max_len: int = 6, conj_len: int = 4
) -> Report:
    report = Report(
        "invariance", seed, dict(trials=trials, points=points, max_len=max_len, conj_len=conj_len)
    )
    rng = random.Random(seed)
    for _ in range(trials):
        k = rng.randint(1, points)
        space = gen.random_qpm(rng, k)
        g = gen.random_reduced_word(rng, k, rng.randint(0, max_len))
        w = gen.random_reduced_word(rng, k, rng.randint(0, conj_len))
        report.record(
            {
                "check": "invariance",
                "space": space_to_dict(space),
                "g": g.tokens(space.labels),
                "w": w.tokens(space.labels),
            }
        )
    return report


def check_restriction(seed: int, instances: int = 200, max_points: int = 4) -> Report:
    report = Report("restriction", seed, dict(instances=instances, max_points=max_points))
    rng = random.Random(seed)
    for _ in range(instances):
        k = rng.randint(1, max_points)
        space = gen.random_qpm(rng, k)
        report.record({"check": "restriction", "space": space_to_dict(space)})
    return report


def check_contraction(
    seed: int, trials: int = 500, points: int = 3, max_len: int = 8
) -> Report:
    report = Report(
        "contraction", seed, dict(trials=trials, points=points, max_len=max_len)
    )
    rng = random.Random(seed)
    for _ in range(trials):
        k = rng.randint(1, points)
        space = gen.random_qpm(rng, k)
        g = gen.random_reduced_word(rng, k, rng.randint(0, max_len))
        report.record(
            {
                "check": "contraction",
                "space": space_to_dict(space),
                "g": g.tokens(space.labels),
            }
        )
    return report


def check_frink(seed: int, trials: int = 200, max_points: int = 6, max_depth: int = 4) -> Report:
    report = Report(
        "frink", seed, dict(trials=trials, max_points=max_points, max_depth=max_depth)
    )
    rng = random.Random(seed)
    for _ in range(trials):
        n = rng.randint(2, max_points)
        chain = gen.random_chain(rng, n, rng.randint(1, max_depth))
        report.record(
            {
                "check": "frink",
                "points": n,
                "levels": [sorted(e.pairs) for e in chain.entourages],
            }
        )
    return report


def check_lemma2(seed: int, small: int = 200, general: int = 200, points: int = 3) -> Report:
    report = Report("lemma2", seed, dict(small=small, general=general, points=points))
    rng = random.Random(seed)
    small_grid = (Fraction(0), Fraction(1, 8), Fraction(1, 4))
    produced = 0
    while produced < small:
        k = rng.randint(1, points)
        space = gen.random_qpm(rng, k, grid=small_grid)
        h = gen.random_balanced_abelian(rng, k, rng.randint(1, 3))
        if h.is_identity() or abelian_norm_matching(h, space) >= 1:
            continue
        produced += 1
        report.record(
            {"check": "lemma2", "space": space_to_dict(space), "abelian": _coeff_map(h)}
        )
    produced = 0
    while produced < general:
        k = rng.randint(1, points)
        space = gen.random_qpm(rng, k)
        h = gen.random_abelian(rng, k, 6)
        if h.is_identity():
            continue
        produced += 1
        report.record(
            {"check": "lemma2", "space": space_to_dict(space), "abelian": _coeff_map(h)}
        )
    return report


def check_lemma3(seed: int, trials: int = 200, max_cyclic: int = 256) -> Report:
    report = Report("lemma3", seed, dict(trials=trials, max_cyclic=max_cyclic))
    rng = random.Random(seed)
    for trial in range(trials):
        if trial % 4 == 3:
            group, order = "symmetric", 4
            table = gen.symmetric_table(4)
        else:
            group, order = "cyclic", rng.randint(2, max_cyclic)
            table = gen.cyclic_table(order)
        depth = rng.randint(2, 5)
        subsets = gen.random_subset_chain(rng, table, depth)
        ks, r = gen.random_chain_product_query(rng, depth)
        report.record(
            {
                "check": "lemma3",
                "group": group,
                "order": order,
                "subsets": subsets,
                "k": ks,
                "r": r,
            }
        )
    return report


def check_lemma4(seed: int, max_n: int = 4, trials: int = 50, points: int = 3) -> Report:
    report = Report("lemma4", seed, dict(max_n=max_n, trials=trials, points=points))
    rng = random.Random(seed)
    for n in range(1, max_n + 1):
        letters = list(range(1, 2 * n + 1))
        for scheme in enumerate_schemes(n):
            report.record(
                {"check": "lemma4", "letters": letters, "scheme": [list(p) for p in scheme.pairs]}
            )
    for _ in range(trials):
        n = rng.randint(1, max_n)
        word = gen.random_reduced_word(rng, points, 2 * n)
        schemes = list(enumerate_schemes(n))
        scheme = schemes[rng.randrange(len(schemes))]
        report.record(
            {
                "check": "lemma4",
                "letters": list(word.letters),
                "scheme": [list(p) for p in scheme.pairs],
            }
        )
    return report


def check_catalan(seed: int, max_n: int = 5, max_abelian: int = 4) -> Report:
    report = Report("catalan", seed, dict(max_n=max_n, max_abelian=max_abelian))
    for n in range(1, max_n + 1):
        report.record({"check": "catalan", "kind": "scheme", "n": n})
    for n in range(1, max_abelian + 1):
        report.record({"check": "catalan", "kind": "abelian", "n": n})
    report.notes["scheme_counts"] = [_catalan(n) for n in range(1, max_n + 1)]
    report.notes["abelian_counts"] = [
        _double_factorial(2 * n - 1) for n in range(1, max_abelian + 1)
    ]
    return report


def check_embedding(
    seed: int, instances: int = 20, trials: int = 100, max_points: int = 5
) -> Report:
    report = Report(
        "embedding", seed, dict(instances=instances, trials=trials, max_points=max_points)
    )
    rng = random.Random(seed)
    for _ in range(instances):
        n = rng.randint(2, max_points)
        space = gen.random_topology(rng, n)
        size = rng.randint(1, n)
        subset = sorted(rng.sample(range(n), size))
        report.record(
            {
                "check": "embedding",
                "expect": "embedded",
                "space": topology_to_dict(space),
                "subset": [space.labels[x] for x in subset],
                "trials": trials,
                "seed": rng.randrange(2**63),
            }
        )
    fixtures = gen.failing_embedding_fixtures()
    report.notes["failing_fixtures"] = len(fixtures)
    for space, subset, subset_space in fixtures:
        report.record(
            {
                "check": "embedding",
                "expect": "witness",
                "space": topology_to_dict(space),
                "subset": [space.labels[x] for x in subset],
                "subset_topology": topology_to_dict(subset_space),
                "trials": 0,
                "seed": 0,
            }
        )
    return report


SUITES = {
    "prenorm": check_prenorm,
    "invariance": check_invariance,
    "restriction": check_restriction,
    "dp-vs-oracle": check_dp_vs_oracle,
    "matching-vs-oracle": check_matching_vs_oracle,
    "frink": check_frink,
    "lemma2": check_lemma2,
    "lemma3": check_lemma3,
    "lemma4": check_lemma4,
    "catalan": check_catalan,
    "embedding": check_embedding,
}


def run_suite(name: str, seed: int, **params) -> Report:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    return SUITES[name](seed, **params)
