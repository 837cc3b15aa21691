import numpy as np
import pytest

import idemrange as ir


def test_build_counts_1d():
    fam = ir.build_cwd_family(N=64, h=2, k=1, d=1)
    assert sorted(fam.sets) == [(1,), (2,)]
    for idx in fam.sets:
        assert abs(len(fam.sets[idx]) - 64) <= 16


def test_build_single_cell_is_whole_projection():
    fam = ir.build_cwd_family(N=1, h=1, k=1, d=2)
    base = ir.hammersley_wd(1, 3)
    assert np.array_equal(fam.sets[(1,)].coords, base.coords[:, :2])


def test_union_of_middle_cells_well_distributed():
    fam = ir.build_cwd_family(N=64, h=4, k=1, d=2)
    union = ir.family_union(fam, [(2, 3)])
    rep = ir.check_well_distributed(union, eps=1e-6, mode="exact")
    assert rep.passed
    assert rep.epsilon_observed > 0


def test_family_union_counts():
    fam = ir.build_cwd_family(N=32, h=4, k=1, d=2)
    full = ir.family_union(fam, [(1, 4)])
    assert len(full) == fam.total_points() == 32 * 4
    single = ir.family_union(fam, [(2, 2)])
    assert np.array_equal(single.coords, fam.sets[(2,)].coords)
    two = ir.family_union(fam, [(2, 3)])
    assert len(two) == len(fam.sets[(2,)]) + len(fam.sets[(3,)])


def test_family_union_range_validation():
    fam = ir.build_cwd_family(N=8, h=2, k=1, d=2)
    with pytest.raises(ValueError):
        ir.family_union(fam, [(0, 2)])
    with pytest.raises(ValueError):
        ir.family_union(fam, [(2, 1)])


def test_ids_globally_unique_and_partitioned():
    fam = ir.build_cwd_family(N=16, h=3, k=2, d=2)
    all_ids = np.concatenate([ps.ids for ps in fam.sets.values()])
    assert np.unique(all_ids).size == all_ids.size == fam.total_points() == 16 * 9


def test_cell_sizes_within_factor_four():
    for N, h, k, d in ((64, 4, 1, 2), (64, 8, 1, 2), (16, 3, 2, 2)):
        fam = ir.build_cwd_family(N, h, k, d)
        for idx, ps in fam.sets.items():
            assert N / 4 <= len(ps) <= 4 * N, (N, h, k, d, idx, len(ps))


def test_verify_cwd_union_count_h2():
    fam = ir.build_cwd_family(N=32, h=2, k=1, d=2)
    rep = ir.verify_cwd(fam, eps=1e-6, mode="sampled", samples=2000)
    assert len(rep.reports) == 3  # h(h+1)/2


def test_verify_cwd_guard():
    fam = ir.build_cwd_family(N=1, h=15, k=2, d=2)  # 120^2 unions > 1e4
    with pytest.raises(ir.TooLarge):
        ir.verify_cwd(fam, eps=0.01, mode="sampled", samples=100)


def test_noncontiguous_union_not_part_of_guarantee():
    fam = ir.build_cwd_family(N=32, h=4, k=1, d=2)
    rep = ir.verify_cwd(fam, eps=1e-9, mode="sampled", samples=1000)
    assert all(len(c) == 1 and c[0][0] <= c[0][1] for c in rep.reports)  # contiguous only


def test_build_guards():
    with pytest.raises(ir.TooLarge):
        ir.build_cwd_family(N=10**7, h=4, k=1, d=2)
    with pytest.raises(ir.Unsupported):
        ir.build_cwd_family(N=4, h=2, k=4, d=2)
    with pytest.raises(ir.Unsupported):
        ir.build_cwd_family(N=4, h=2, k=3, d=4)


def test_cwd_serialization_roundtrip(tmp_path):
    fam = ir.build_cwd_family(N=8, h=2, k=1, d=2)
    ir.save_cwd(fam, tmp_path / "fam")
    back = ir.load_cwd(tmp_path / "fam")
    assert back.h == fam.h and back.k == fam.k and back.d == fam.d
    for idx in fam.sets:
        assert np.array_equal(back.sets[idx].coords, fam.sets[idx].coords)
        assert np.array_equal(back.sets[idx].ids, fam.sets[idx].ids)
    manifest = (tmp_path / "fam" / "manifest").read_text().split()
    assert manifest == ["2", "1", "2", "8"]
