"""Acceptance gate: one test, and one ``pytest -v`` line, per guarantee.

Heavier than the unit suites on purpose: exhaustive small corpora, a
five-digit random corpus per action discipline, and thousand-instance law
checks. Everything is deterministic (fixed RNG seeds), so the frozen class
counts double as regression anchors.
"""

import random

import pytest

from ccseed.cli import main
from ccseed.congruence import (canonical_finite, canonical_key, canonicalize,
                               clear_caches, congruent, process_of)
from ccseed.corpus import (compose, default_actions, enumerate_finite,
                           enumerate_processes, make_redundant,
                           random_context, random_finite, random_process,
                           random_substitution)
from ccseed.oracle import (GameConfig, bounded_bisim, bounded_partition,
                           finite_bisim, finite_partition, lemma_suite_sharded,
                           replay_distinguisher)
from ccseed.rewrite import (RewriteStep, clear_search_audit, clear_seed_cache,
                            compute_seed, convertible, search_audit, seed_of)
from ccseed.syntax import (Action, FiniteProcess, PrefixedTerm, Process,
                           apply_substitution, parse, render)

GAME_DEPTH = 6
ACTS_BASE = default_actions(2)
ACTS_SYNC = default_actions(2, "sync")


def _corpus(mode, rng_seed, random_count=10200, max_random_size=8):
    acts = default_actions(2, mode)
    procs = enumerate_processes(5, acts)
    rng = random.Random(rng_seed)
    procs += [random_process(rng, rng.randint(1, max_random_size), acts)
              for _ in range(random_count)]
    return procs


def _bundle(mode, rng_seed):
    corpus = _corpus(mode, rng_seed)
    seeds = [compute_seed(p) for p in corpus]
    keys = [s.seed.key for s in seeds]
    classes = bounded_partition(corpus, GAME_DEPTH, mode=mode)
    return corpus, seeds, keys, classes


@pytest.fixture(scope="module")
def base_bundle():
    return _bundle("base", 2026)


@pytest.fixture(scope="module")
def sync_bundle():
    return _bundle("sync", 2027)


def _cross_check(corpus, keys, classes, mode, rng_seed, samples=250):
    """Explicit pairwise games against the two partition maps.

    Convertible pairs must never be distinguished; every produced
    distinguisher must replay. Returns the number of convertible pairs
    exercised so callers can assert non-vacuity.
    """
    rng = random.Random(rng_seed)
    by_key = {}
    for i, k in enumerate(keys):
        by_key.setdefault(k, []).append(i)
    rich = [g for g in by_key.values() if len(g) >= 2]
    cfg = GameConfig(depth=GAME_DEPTH, mode=mode)
    convertible_pairs = 0
    for n in range(samples):
        if n % 2 and rich:
            group = rng.choice(rich)
            i, j = rng.sample(group, 2)
        else:
            i, j = rng.randrange(len(corpus)), rng.randrange(len(corpus))
        p, q = corpus[i], corpus[j]
        conv = convertible(p, q)
        assert conv.equivalent == (keys[i] == keys[j])
        game = bounded_bisim(p, q, cfg)
        assert game.equivalent == (classes[p] == classes[q])
        if conv.equivalent:
            convertible_pairs += 1
            assert game.equivalent
            assert game.distinguisher is None
        if not game.equivalent:
            assert not conv.equivalent
            assert replay_distinguisher(p, q, game.distinguisher, mode=mode)
    return convertible_pairs


def test_criterion_1_golden_examples(capsys):
    code = main(["check", "!a.(b.0|a.c.0)|!a.(c.0|a.b.0)", "!a.b.0|!a.c.0"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[0] == "bisimilar"
    assert "seed: !a.b.0 | !a.c.0" in out

    code = main(["seed", "!a.(b.0|a.b.0)"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "!a.b.0"

    code = main(["normalize", "a.(b.0|a.b.0)"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "a.b.0 | a.b.0"

    res = convertible(parse("!a.(b.0|a.c.0)|!a.(c.0|a.b.0)"),
                      parse("!a.b.0|!a.c.0"))
    assert res.equivalent
    assert render(res.witness) == "!a.b.0 | !a.c.0"


def test_criterion_2_congruence_is_finite_bisimilarity():
    fps = enumerate_finite(5, ACTS_BASE)
    assert len(fps) == 601

    game = finite_partition(fps)
    by_congruence = {}
    by_game = {}
    for i, fp in enumerate(fps):
        by_congruence.setdefault(canonical_finite(fp).key, []).append(i)
        by_game.setdefault(game[fp], []).append(i)
    blocks_c = {frozenset(g) for g in by_congruence.values()}
    blocks_g = {frozenset(g) for g in by_game.values()}
    assert blocks_c == blocks_g
    assert len(blocks_c) == 312

    rng = random.Random(2)
    for _ in range(2000):
        f1, f2 = rng.choice(fps), rng.choice(fps)
        assert (congruent(process_of(f1), process_of(f2))
                == finite_bisim(f1, f2))


def test_criterion_3_rewriting_agrees_with_bounded_game(base_bundle):
    corpus, _seeds, keys, classes = base_bundle
    assert len(corpus) == 12378

    groups = {}
    for p, k in zip(corpus, keys):
        groups.setdefault(k, set()).add(classes[p])
    assert all(len(cls) == 1 for cls in groups.values())
    assert len(groups) == 1219
    assert len(set(classes.values())) == 1019

    exercised = _cross_check(corpus, keys, classes, "base", rng_seed=3)
    assert exercised >= 100


def test_criterion_4_steps_shrink_and_searches_stay_bounded():
    clear_seed_cache()
    clear_caches()
    clear_search_audit()

    rng = random.Random(4)
    work = enumerate_processes(5, ACTS_BASE)
    work += [random_process(rng, rng.randint(1, 8), ACTS_BASE)
             for _ in range(800)]
    checked = []
    for p in work:
        checked.append((canonicalize(p), compute_seed(p)))
    for _ in range(200):
        p = random_process(rng, rng.randint(1, 6), ACTS_BASE)
        q = make_redundant(rng, p, rng.randint(1, 2))
        assert convertible(p, q).equivalent
        checked.append((canonicalize(q), compute_seed(q)))

    for start, res in checked:
        state = start
        for step in res.trace:
            assert step.axiom in ("B1", "B2")
            assert step.before == state
            assert step.after.size < step.before.size
            state = step.after
        assert state == res.seed

    with pytest.raises(ValueError):
        RewriteStep("B1", parse("a.0"), parse("a.0|b.0"))

    assert len(search_audit) > 1000
    assert all(visited <= 2 ** size for size, visited in search_audit)


def test_criterion_5_seed_unique_across_enumeration_orders(base_bundle):
    corpus, seeds, _keys, _classes = base_bundle
    exhaustive = 2178
    picks = list(range(exhaustive)) + list(range(exhaustive, len(corpus), 7))
    for i in picks:
        assert compute_seed(corpus[i], order="desc").seed == seeds[i].seed


def test_criterion_6_copy_absorption_laws_hold():
    rng = random.Random(6)
    for _ in range(1000):
        act = rng.choice(ACTS_BASE)
        body = random_finite(rng, rng.randint(0, 3), ACTS_BASE)
        bang = Process((PrefixedTerm(act, body),), FiniteProcess())
        ctx = random_context(rng, rng.randint(0, 4), ACTS_BASE)
        with_copy = compose(bang, ctx.plug((PrefixedTerm(act, body),)))
        without = compose(bang, ctx.plug(()))
        assert convertible(with_copy, without).equivalent

    for _ in range(1000):
        act = rng.choice(ACTS_BASE)
        ctx = random_context(rng, rng.randint(0, 3), ACTS_BASE,
                             finite_only=True)
        once = PrefixedTerm(act, ctx.plug(()).finite)
        twice = PrefixedTerm(act, ctx.plug((once,)).finite)
        assert convertible(Process((twice,), FiniteProcess()),
                           Process((once,), FiniteProcess())).equivalent


def test_criterion_7_sync_mode_agreement(sync_bundle):
    corpus, _seeds, keys, classes = sync_bundle
    assert len(corpus) == 12378

    groups = {}
    for p, k in zip(corpus, keys):
        groups.setdefault(k, set()).add(classes[p])
    assert all(len(cls) == 1 for cls in groups.values())
    assert len(groups) == 1177
    assert len(set(classes.values())) == 1141

    exercised = _cross_check(corpus, keys, classes, "sync", rng_seed=7)
    assert exercised >= 100


def test_criterion_8_convertibility_closed_under_renaming():
    rng = random.Random(8)
    acts = default_actions(3)
    names = [a.name for a in acts]
    saw_non_injective = False
    for n in range(1000):
        p = random_process(rng, rng.randint(1, 5), acts)
        if n % 2:
            q = make_redundant(rng, p, rng.randint(1, 2))
        else:
            q = seed_of(p)
        assert convertible(p, q).equivalent
        sigma = random_substitution(rng, names)
        saw_non_injective |= len(set(sigma.values())) < len(names)
        assert convertible(apply_substitution(p, sigma),
                           apply_substitution(q, sigma)).equivalent
    assert saw_non_injective


def test_criterion_9_lemma_suites_clean_and_nonvacuous():
    for mode in ("base", "sync"):
        report = lemma_suite_sharded(seed=90, rounds=120, shards=4, mode=mode)
        assert report.ok
        assert report.all_hypotheses_hit
        for stats in report.properties.values():
            assert stats.counterexamples == []
            assert stats.hits > 0
            assert stats.instances >= stats.hits
