"""Pure-Python prefix-walk kernel.

Fallback twin of the compiled kernel in _walk_cy; both must produce
identical results for the same input.
"""

from bisect import bisect_left


def walk(values, width, query_overhead_bits, response_bits):
    """Run one inventory round over sorted distinct tag values.

    The reader starts at the empty prefix; a collision descends to the
    0-child then the 1-child, a single read acknowledges the tag (it stays
    silent afterwards), silence backtracks.  Once the walk completes, one
    closing root query confirms that every tag has been acknowledged; for an
    empty population the opening root query already hears that silence.

    Each query costs query_overhead_bits plus its prefix length on the air;
    every tag answering a query (even into a collision) costs response_bits.

    Returns (order, queries_issued, bits_on_air) where order lists the tag
    values in the sequence they were read (ascending, from the 0-first
    descent).
    """
    n = len(values)
    order = []
    queries = 0
    bits = 0

    def visit(lo, hi, base, prefix_len):
        nonlocal queries, bits
        count = hi - lo
        queries += 1
        bits += query_overhead_bits + prefix_len + count * response_bits
        if count == 0:
            return
        if count == 1:
            order.append(values[lo])
            return
        # Distinct values force prefix_len < width here, so the split exists.
        child_span = 1 << (width - prefix_len - 1)
        mid_value = base + child_span
        mid = bisect_left(values, mid_value, lo, hi)
        visit(lo, mid, base, prefix_len + 1)
        visit(mid, hi, mid_value, prefix_len + 1)

    visit(0, n, 0, 0)
    if n > 0:
        # Closing root query: all tags acknowledged, the reader hears silence.
        queries += 1
        bits += query_overhead_bits
    return order, queries, bits
