"""Smoke tests for the arbopy module against the worked fixtures."""

import sys

import arbopy


def rel(classes, n=4):
    return arbopy.EquivRelation(n, classes)


def test_relation_algebra():
    r1 = rel([[0, 1], [2], [3]])
    r2 = rel([[0], [1, 2], [3]])
    r = arbopy.join([r1, r2])
    assert r.classes() == [[0, 1, 2], [3]]
    assert arbopy.intersect(r1, r2).is_trivial()
    assert arbopy.saturate(r, [1]) == [0, 1, 2]
    assert arbopy.fundamental_domain(r) == [0, 3]
    assert arbopy.is_subrelation(rel([[0, 2], [1], [3]]), r)


def test_free_product_verdicts():
    r1 = rel([[0, 1], [2], [3]])
    r2 = rel([[0], [1, 2], [3]])
    r = arbopy.join([r1, r2])
    check = arbopy.verify_free_product(r, [r1, r2])
    assert check["accepted"]
    assert arbopy.bass_serre_is_tree(r, r1, r2)

    c1 = rel([[0, 1], [2, 3]])
    c2 = rel([[1, 2], [3, 0]])
    c = arbopy.join([c1, c2])
    check = arbopy.verify_free_product(c, [c1, c2])
    assert not check["accepted"]
    assert check["tuple_points"] == [0, 1, 2, 3, 0]
    assert check["tuple_tags"] == [1, 2, 1, 2]
    assert not arbopy.oracle_is_free_product(c, [c1, c2])


def test_treeing_and_kurosh():
    r1 = rel([[0, 1], [2], [3]])
    r2 = rel([[0], [1, 2], [3]])
    r = arbopy.join([r1, r2])
    s = rel([[0, 2], [1], [3]])
    assert arbopy.extract_treeing(r, r1, r2, s) == [(0, 2)]
    k = arbopy.kurosh(r, [r1, r2], s)
    assert k["freeness_accepted"]
    assert k["treeing"] == [(0, 2)]
    ids = [f for f in k["factors"] if f["identity"]]
    assert len(ids) == 2

    d = arbopy.restrict_decomposition(r, [r1, r2], [0, 3])
    assert d["saturation_partition"]


def test_generator_determinism():
    a = arbopy.gen_free_product_text(7, 9, 3)
    b = arbopy.gen_free_product_text(7, 9, 3)
    assert a == b
    parsed = arbopy.parse_instance_text(a)
    assert parsed["space"] == 9
    r = parsed["relations"]["R"]
    factors = [parsed["relations"][n] for n in parsed["free_factors"]]
    assert arbopy.verify_free_product(r, factors)["accepted"]
    sub = arbopy.gen_subrelation(3, r, 0.5)
    assert arbopy.is_subrelation(sub, r)


def test_errors_surface():
    r1 = rel([[0, 1], [2], [3]])
    try:
        arbopy.EquivRelation(4, [[0, 0]])
    except arbopy.ArboError:
        pass
    else:
        raise AssertionError("repeated point should raise")
    try:
        arbopy.saturate(r1, [9])
    except arbopy.ArboError:
        pass
    else:
        raise AssertionError("out-of-range point should raise")


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    sys.exit(main())
