"""Pure-Python partition refinement kernel (fallback for ``_refine.pyx``)."""


def refine(n, ptr, dst, color, block, max_rounds):
    """Refine ``block`` by out-edge signatures for at most ``max_rounds`` rounds.

    A state's signature is its current block plus the sorted multiset of
    ``(color, block of target)`` over its out-edges (CSR layout ``ptr``/``dst``/
    ``color``). Blocks are renumbered by first occurrence in state order.
    Returns ``(block, rounds, stable)``; ``rounds`` counts rounds that split
    something and ``stable`` is True once a round produced no split.
    """
    block = _renumber(block)
    count = len(set(block))
    rounds = 0
    while rounds < max_rounds:
        ids = {}
        new = [0] * n
        for q in range(n):
            sig = (block[q],) + tuple(
                sorted((color[i], block[dst[i]]) for i in range(ptr[q], ptr[q + 1]))
            )
            new[q] = ids.setdefault(sig, len(ids))
        if len(ids) == count:
            return block, rounds, True
        block = new
        count = len(ids)
        rounds += 1
    return block, rounds, False


def _renumber(block):
    seen = {}
    return [seen.setdefault(b, len(seen)) for b in block]
