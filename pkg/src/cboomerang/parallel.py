"""Order-preserving process pool map; results never depend on worker count."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def chunks(seq, k):
    """Split seq into at most k contiguous, order-preserving pieces."""
    seq = list(seq)
    k = max(1, min(k, len(seq)))
    size, extra = divmod(len(seq), k)
    out, start = [], 0
    for i in range(k):
        stop = start + size + (i < extra)
        out.append(seq[start:stop])
        start = stop
    return [c for c in out if c]


def pmap(func, items, workers=1):
    items = list(items)
    if workers is None or workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, items))
