import numpy as np
import pytest

import idemrange as ir


@pytest.fixture(scope="session")
def built_cache():
    """Shared built structures keyed by (n, d, k, sg-name); inputs seeded by shape."""
    cache = {}

    def get(n, d, k, sg):
        key = (n, d, k, sg.name)
        if key not in cache:
            pts = ir.uniform_random(n, d, seed=hash((n, d, k)) % 2**31)
            cache[key] = (pts, ir.build_ids(pts, k, sg))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def exactness_suite():
    """Criterion 1/2 workload: n=4096, d=2, k=1, idset; 1000 uniform + 1000
    hard queries checked against the scan oracle with containment audits."""
    import time

    n = 4096
    pts = ir.uniform_random(n, 2, seed=20240809)
    struct = ir.build_ids(pts, 1, ir.ID_SET)
    t0 = time.time()
    mismatches = 0
    containment_violations = 0
    queries = 0
    rng = np.random.default_rng(77)
    for i in range(1000):
        a, b = sorted(rng.random(2).tolist())
        q = ir.Box((a, ir.NEG_INF), (b, float(rng.random())))
        ans, audit = struct.query(q, return_audit=True)
        got = ans.value if ans.value is not None else np.empty(0, np.int64)
        if not np.array_equal(got, ir.scan_ids(pts, q)):
            mismatches += 1
        for bx in audit:
            if not all(bl >= ql and bh <= qh for bl, bh, ql, qh in zip(bx.lo, bx.hi, q.lo, q.hi)):
                containment_violations += 1
        queries += 1
    for i in range(1000):
        hq = ir.sample_hard_query(rng, struct.trees)
        q = hq.box
        ans, audit = struct.query(q, return_audit=True)
        got = ans.value if ans.value is not None else np.empty(0, np.int64)
        if not np.array_equal(got, ir.scan_ids(pts, q)):
            mismatches += 1
        for bx in audit:
            if not all(bl >= ql and bh <= qh for bl, bh, ql, qh in zip(bx.lo, bx.hi, q.lo, q.hi)):
                containment_violations += 1
        queries += 1
    elapsed = time.time() - t0
    return {
        "queries": queries,
        "mismatches": mismatches,
        "containment_violations": containment_violations,
        "elapsed": elapsed,
    }
