"""Shared test helpers: independent oracles the implementation is checked against."""

from rfidsim.rflink import backscatter_detectable, can_power_tag


def oracle_walk(values, width, query_overhead_bits, response_bits):
    """Literal brute-force simulation of the prefix walk.

    Keeps an explicit set of active tag bit-strings, matches prefixes by
    string comparison, silences a tag once acknowledged, and finishes with
    the closing root query.  Deliberately shares no code with the package's
    walk kernels.

    Returns (order, queries, bits_on_air).
    """
    active = {format(v, f"0{width}b") for v in values}
    order = []
    queries = 0
    bits = 0

    def query(prefix):
        nonlocal queries, bits
        queries += 1
        matches = sorted(b for b in active if b.startswith(prefix))
        bits += query_overhead_bits + len(prefix) + len(matches) * response_bits
        return matches

    def walk(prefix):
        matches = query(prefix)
        if not matches:
            return
        if len(matches) == 1:
            order.append(int(matches[0], 2))
            active.remove(matches[0])
            return
        walk(prefix + "0")
        walk(prefix + "1")

    walk("")
    if order:
        assert query("") == []
    return order, queries, bits


def oracle_dedup(reads, window):
    """Replay the suppression rule independently for each tag, then remerge."""
    tags = {tag for _, tag, _ in reads}
    kept = set()
    for wanted in tags:
        last = None
        for i, (_, tag, ts) in enumerate(reads):
            if tag != wanted:
                continue
            if last is None or ts - last >= window:
                kept.add(i)
                last = ts
    return [read for i, read in enumerate(reads) if i in kept]


def bisect_read_range(params, medium, lo=1e-9, hi=1.0, iterations=200):
    """Find the largest distance where both link predicates hold, by bisection."""

    def ok(d):
        return can_power_tag(params, medium, d, 0.0) and backscatter_detectable(
            params, medium, d
        )

    assert ok(lo), "link must close at point-blank range for bisection to work"
    while ok(hi):
        hi *= 2.0
        assert hi < 1e9, "no finite read range found"
    for _ in range(iterations):
        mid = (lo + hi) / 2.0
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo
