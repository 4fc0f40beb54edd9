"""Canonical forms for the structural congruence with the distribution law.

The congruence is generated by the abelian-monoid laws of parallel
composition (already baked into the multiset representation) together with

    a.(F | a.F | ... | a.F)  =  a.F | a.F | ... | a.F

with the same number of F occurrences on both sides.  Reading it left to
right distributes a prefix over the copies it guards; the n = 0 instance is
the familiar a.a.0 = a.0 | a.0.

``canonicalize`` rewrites innermost-first.  At a prefix node whose body
components are already canonical, a redex fires at most once and its result
components are canonical, so a single bottom-up pass suffices.  Replicated
bodies are canonicalized as finite processes; the law's outer constructor is
a prefix, so a bang component itself never fires (the result would not be a
process of the grammar).

Left-to-right rewriting is size-preserving and terminates; uniqueness of the
resulting form is validated exhaustively against the finite bisimilarity
oracle rather than proved here.
"""

from __future__ import annotations

from collections import Counter
from typing import Union

from .syntax import FiniteProcess, PrefixedTerm, Process

__all__ = [
    "canonicalize", "canonical_finite", "canonical_components",
    "congruent", "canonical_key", "process_of", "clear_caches",
]

_CANON_COMPS: dict = {}
_CANON_FIN: dict = {}
_CANON_PROC: dict = {}


def canonical_components(t: PrefixedTerm) -> tuple:
    """Canonical form of a prefixed term, as its multiset of components.

    The result is a single term unless the distribution law fires at the
    root, in which case it is n+1 copies of one canonical prefixed term.
    """
    cached = _CANON_COMPS.get(t)
    if cached is not None:
        return cached

    body = canonical_finite(t.body)
    counts = Counter(body.components)
    act_key = t.action.key
    fired = None
    for c in counts:
        if c.action.key != act_key:
            continue
        # body must equal c.body plus n copies of c; n is forced by counts.
        n = counts[c] - c.body.components.count(c)
        if n < 1:
            continue
        want = Counter(c.body.components)
        want[c] += n
        if want == counts:
            if fired is None or c._key < fired[0]._key:
                fired = (c, n)

    if fired is None:
        result = (PrefixedTerm(t.action, body),)
    else:
        c, n = fired
        result = (c,) * (n + 1)
    _CANON_COMPS[t] = result
    return result


def canonical_finite(fp: FiniteProcess) -> FiniteProcess:
    cached = _CANON_FIN.get(fp)
    if cached is not None:
        return cached
    out = []
    for c in fp.components:
        out.extend(canonical_components(c))
    result = FiniteProcess(out)
    _CANON_FIN[fp] = result
    _CANON_FIN[result] = result
    return result


def canonicalize(p: Process) -> Process:
    """The canonical representative of p's congruence class."""
    cached = _CANON_PROC.get(p)
    if cached is not None:
        return cached
    result = Process(
        (PrefixedTerm(t.action, canonical_finite(t.body)) for t in p.replicated),
        canonical_finite(p.finite),
    )
    _CANON_PROC[p] = result
    _CANON_PROC[result] = result
    return result


def process_of(term: Union[Process, FiniteProcess, PrefixedTerm]) -> Process:
    """View any term as a Process (prefixed terms become one finite component)."""
    if isinstance(term, Process):
        return term
    if isinstance(term, FiniteProcess):
        return Process((), term)
    if isinstance(term, PrefixedTerm):
        return Process((), FiniteProcess((term,)))
    raise TypeError(f"not a term: {term!r}")


def congruent(p: Process, q: Process) -> bool:
    """Decide the congruence: equal canonical forms."""
    return canonicalize(process_of(p)) == canonicalize(process_of(q))


def canonical_key(p) -> tuple:
    return canonicalize(process_of(p)).key


def clear_caches() -> None:
    _CANON_COMPS.clear()
    _CANON_FIN.clear()
    _CANON_PROC.clear()
