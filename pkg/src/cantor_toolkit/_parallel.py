"""Optional worker-thread mapping, capped by CANTOR_TOOLKIT_THREADS.

Work items are pure functions of their inputs, and results come back in
input order, so parallel runs are byte-identical to sequential ones.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_budget() -> int:
    raw = os.environ.get("CANTOR_TOOLKIT_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items):
    items = list(items)
    workers = thread_budget()
    if workers <= 1 or len(items) < 4:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
