"""Smoke test for the compiled module. Run after `pip install -e crates/py`."""

from pathlib import Path

import symdyn

DATA = Path(__file__).resolve().parents[2] / "cli" / "tests" / "data"


def thue_morse(n: int) -> str:
    return str(bin(n).count("1") % 2)


def main() -> None:
    tm = symdyn.Substitution((DATA / "tm.sub").read_text())
    assert tm.alphabet == ["0", "1"]
    assert tm.constant_length == 2
    assert tm.apply("0", 3) == "01101001"

    z = tm.qfp("interior a=0 i=5 m=4")
    assert z.relation() == (4, 5)
    assert z.relation_text() == "T^5(φ^4(z))=z"
    assert z.verify(2000)
    # On [-5, 10] the point reads φ^4(0) from index 5 on.
    assert z.window(-5, 10) == "".join(thue_morse(n + 5) for n in range(-5, 11))
    assert z.address() == ("-1", "3", 2)
    assert z.digits() == ([], [1, 0])

    k = z.kernel()
    assert k.base == 2
    assert k.size <= k.raw_states
    lo, hi = -60, 60
    assert "".join(k.eval(n) for n in range(lo, hi + 1)) == z.window(lo, hi)
    assert k.to_dot().startswith("digraph")

    assert symdyn.kadic_relation(5, 4, 2) == ("-1/3", "pre= cyc=10")
    assert symdyn.kadic_expand(3, 1, 2) == ("3/1", "pre=11 cyc=0")
    try:
        symdyn.kadic_expand(1, 2, 2)
    except symdyn.SymdynError:
        pass
    else:
        raise AssertionError("1/2 is not a 2-adic integer")

    remark = symdyn.Substitution((DATA / "remark.sub").read_text())
    assert remark.letters() == ["1", "2"]

    points = tm.qfps(2, dedup=True)
    assert points and all(p.verify(200) for p in points)

    tm.verify_block_laws(2, samples=20, max_len=6)
    transient = symdyn.Substitution((DATA / "transient.sub").read_text())
    try:
        transient.verify_block_laws(1, samples=20, max_len=6)
    except symdyn.InvariantError:
        pass
    else:
        raise AssertionError("block laws should fail for a letter outside the subshift")

    results = symdyn.run_examples()
    assert results and all(ok for _, ok in results), results
    print(f"smoke test passed ({len(results)} worked examples)")


if __name__ == "__main__":
    main()
