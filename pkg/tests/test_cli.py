import io
import random
from fractions import Fraction

import pytest

from ehpack.cli import main
from ehpack.eh_core import pack_stream
from ehpack.packfile import (
    ParseError,
    derive_stats,
    read_items,
    read_packing,
    verify_packing,
    write_packing,
)
from ehpack.params import builtin, dumps_params

from conftest import random_stream, write_stream


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


# ------------------------------------------------------------ file formats


def test_read_items_formats():
    lines = ["# header", "1/2", "", "0.25  # quarter", "1/3 4", "0.1 0"]
    assert list(read_items(lines)) == [Fraction(1, 2), Fraction(1, 4), (Fraction(1, 3), 4), (Fraction(1, 10), 0)]


@pytest.mark.parametrize("bad,lineno", [(["1/2", "3/"], 2), (["x"], 1), (["1/2 a"], 1), (["1 2 3"], 1), (["1/2 -1"], 1)])
def test_read_items_errors(bad, lineno):
    with pytest.raises(ParseError) as exc:
        list(read_items(bad))
    assert exc.value.lineno == lineno


def test_packing_file_round_trip(eh2):
    pk = pack_stream(eh2, random_stream(random.Random(3), 400))
    buf = io.StringIO()
    write_packing(pk, buf)
    pf = read_packing(buf.getvalue().splitlines())
    assert pf.d == 2 and pf.N == 151 and pf.label == "eh2"
    assert len(pf.bins) == pk.total_bins
    assert pf.stats == derive_stats(pf, eh2)
    assert verify_packing(pf, eh2) == []


def test_counting_mode_cannot_be_written(eh2):
    pk = pack_stream(eh2, [Fraction(1, 2)], layout=False)
    with pytest.raises(ValueError):
        write_packing(pk, io.StringIO())


def _packed_text(p, sizes):
    pk = pack_stream(p, sizes)
    buf = io.StringIO()
    write_packing(pk, buf)
    return buf.getvalue().splitlines()


def test_read_packing_errors(eh2):
    lines = _packed_text(eh2, [Fraction(1, 2)] * 3)
    with pytest.raises(ParseError, match="missing 'end'"):
        read_packing(lines[:3])
    bad = list(lines)
    bad[1] = bad[1].replace("blue", "green")
    with pytest.raises(ParseError, match="unknown color") as exc:
        read_packing(bad)
    assert exc.value.lineno == 2
    with pytest.raises(ParseError):
        read_packing(["2 151"])


# -------------------------------------------------------------------- cli


def test_pack_empty_input(tmp_path):
    src = tmp_path / "empty.txt"
    src.write_text("")
    code, out = run("pack", "--dim", 2, "--params", "eh2", "--input", src, "--output", tmp_path / "o.pack")
    assert code == 0 and out.strip() == "0 bins"
    assert run("verify", tmp_path / "o.pack")[0] == 0


def test_pack_verify_round_trip_and_stats_file(tmp_path):
    src = tmp_path / "in.txt"
    write_stream(src, random_stream(random.Random(9), 300))
    out_path, stats = tmp_path / "o.pack", tmp_path / "o.stats"
    code, _ = run("pack", "--dim", 2, "--params", "eh2", "--input", src, "--output", out_path, "--stats", stats)
    assert code == 0
    code, out = run("verify", out_path)
    assert code == 0 and out.startswith("ok:")
    lines = stats.read_text().splitlines()
    assert len(lines) == 152
    assert lines == out_path.read_text().splitlines()[-152:]


def test_verify_reports_injected_overlap(tmp_path):
    lines = _packed_text(builtin("eh2"), [Fraction("0.45")] * 4)
    # move the second item onto the first
    fields = lines[2].split()
    fields[4:6] = ["0", "0"]
    lines[2] = " ".join(fields)
    path = tmp_path / "bad.pack"
    path.write_text("\n".join(lines) + "\n")
    code, out = run("verify", path)
    assert code == 1
    assert "bin 0" in out and "line 2" in out and "line 3" in out


def test_verify_truncated_file(tmp_path):
    lines = _packed_text(builtin("eh2"), [Fraction(1, 2)] * 5)
    path = tmp_path / "cut.pack"
    path.write_text("\n".join(lines[:4]) + "\n")
    assert run("verify", path)[0] == 1


def test_verify_wrong_stats_footer(tmp_path):
    lines = _packed_text(builtin("eh2"), [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)])
    Y, q, e, total = lines[-1].split()
    lines[-1] = f"{int(Y) + 1} {q} {e} {total}"
    path = tmp_path / "y.pack"
    path.write_text("\n".join(lines) + "\n")
    code, out = run("verify", path)
    assert code == 1 and "Y is" in out


def test_usage_errors(tmp_path):
    src = tmp_path / "in.txt"
    src.write_text("1/2\n")
    assert run("pack", "--dim", 3, "--params", "eh2", "--input", src, "--output", tmp_path / "o")[0] == 2
    assert run("pack", "--dim", 2, "--params", "eh2", "--input", tmp_path / "none", "--output", tmp_path / "o")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("analyze", "--dim", 2, "--case", 18)[0] == 2
    assert run("analyze", "--dim", 4)[0] == 2
    assert run("analyze", "--dim", 2, "--case", 1, "--tol", 0)[0] == 2


def test_bad_item_in_input(tmp_path):
    src = tmp_path / "in.txt"
    src.write_text("1/2\n3/2\n")
    assert run("pack", "--dim", 2, "--params", "eh2", "--input", src, "--output", tmp_path / "o")[0] == 1
    src.write_text("1/2\n1/\n")
    assert run("pack", "--dim", 2, "--params", "eh2", "--input", src, "--output", tmp_path / "o")[0] == 1


def test_params_dump_and_validate(tmp_path):
    code, text = run("params", "--dump", "eh2")
    assert code == 0 and text == dumps_params(builtin("eh2"))
    path = tmp_path / "eh2.params"
    path.write_text(text)
    code, out = run("params", "--validate", path)
    assert code == 1 and "134" in out and "140" in out
    path.write_text(run("params", "--dump", "eh2", "--variant", "corrected")[1])
    assert run("params", "--validate", path)[0] == 0
    path.write_text(run("params", "--dump", "prior2")[1])
    assert run("params", "--validate", path)[0] == 0
    path.write_text(text.replace("[alpha]\n", "[alpha]\n3/\n", 1))
    assert run("params", "--validate", path)[0] == 1


def test_custom_parameter_file_packs(tmp_path):
    ppath = tmp_path / "app.params"
    ppath.write_text(run("params", "--dump", "example6")[1])
    src = tmp_path / "in.txt"
    src.write_text("0.9\n2/3 2\n0.3 2\n1/3 14\n0.3 12\n")
    code, out = run("pack", "--dim", 2, "--params", ppath, "--input", src, "--output", tmp_path / "o.pack")
    assert code == 0 and out.strip() == "5 bins"
    assert run("verify", tmp_path / "o.pack", "--params", ppath)[0] == 0


def test_weigh(tmp_path):
    src = tmp_path / "in.txt"
    write_stream(src, random_stream(random.Random(4), 500))
    code, out = run("weigh", "--dim", 2, "--params", "eh2", "--case", "all", "--input", src)
    assert code == 0
    assert out.splitlines()[0] == "case total" and len(out.splitlines()) == 1 + 17 + 3
    code, out = run("weigh", "--dim", 2, "--params", "eh2", "--case", 5, "--input", src, "--exact")
    assert code == 0 and "/" in out.splitlines()[1]


def test_analyze_single_case():
    code, out = run("analyze", "--dim", 2, "--case", 1)
    assert code == 0
    row = out.splitlines()[1].split()
    assert row[0] == "1" and abs(float(row[1]) - 2.088447879968511) <= 1e-6
    code, out = run("analyze", "--dim", 2, "--case", 1, "--emit", "csv")
    assert out.splitlines()[0] == "case,bound,incumbent,gap,nodes,seconds"


def test_analyze_budget_flag():
    code, out = run("analyze", "--dim", 2, "--case", 9, "--budget-nodes", 1)
    assert code == 0 and "budget exhausted" in out


def test_adversary_commands():
    code, out = run("adversary", "--which", "p1")
    assert code == 0 and "analytic ratio 2.12294632176" in out
    code, out = run("adversary", "--which", "p2", "--emit", "stream")
    assert code == 0 and out.startswith("# P2")
    code, out = run("adversary", "--which", "generic", "--dim", 3)
    assert code == 0 and "lower bound d=3: 2.34085648" in out
    code, out = run("adversary", "--which", "generic", "--dim", 1, "--exact")
    assert code == 0 and "19/12" in out
    assert run("adversary", "--which", "p1", "--scale", 0)[0] == 2


def test_pack_output_is_deterministic(tmp_path):
    src = tmp_path / "in.txt"
    write_stream(src, random_stream(random.Random(21), 1500))
    outs = []
    for k in range(2):
        path = tmp_path / f"o{k}.pack"
        assert run("pack", "--dim", 2, "--params", "eh2", "--input", src, "--output", path)[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert run("adversary", "--which", "p1", "--emit", "stream") == run("adversary", "--which", "p1", "--emit", "stream")


def _round_trip(tmp_path, sizes, name="eh2", d=2):
    src = tmp_path / "in.txt"
    write_stream(src, sizes)
    out = tmp_path / "o.pack"
    assert run("pack", "--dim", d, "--params", name, "--input", src, "--output", out)[0] == 0
    code, msg = run("verify", out)
    assert code == 0, msg


def test_round_trip_small_streams(tmp_path, seed):
    rng = random.Random(seed)
    for k in range(100):
        name, d = rng.choice([("eh2", 2), ("eh3", 3), ("prior2", 2)])
        _round_trip(tmp_path, random_stream(rng, 100), name, d)


def test_round_trip_medium_streams(tmp_path, seed):
    rng = random.Random(seed + 1)
    for k in range(5):
        _round_trip(tmp_path, random_stream(rng, 10**4))


@pytest.mark.slow
def test_round_trip_million_items(tmp_path, seed):
    _round_trip(tmp_path, random_stream(random.Random(seed + 2), 10**6))
