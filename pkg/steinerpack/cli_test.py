import pathlib
from typing import Any, Tuple

import pytest

from steinerpack import families
from steinerpack.cli import main
from steinerpack.formats import format_instance, parse_instance
from steinerpack.instances import GstpInstance

K4_TWO_TREES = format_instance(GstpInstance(families.complete(4), [range(4)], [2]))


def run(capsys: Any, *argv: str) -> Tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def k4(tmp_path: pathlib.Path) -> str:
    path = tmp_path / "k4.gstp"
    path.write_text(K4_TWO_TREES)
    return str(path)


def test_gen_windmill(capsys: Any) -> None:
    code, out, _ = run(capsys, "gen", "windmill", "3")
    assert code == 0
    assert out.splitlines()[0] == "c windmill 3"
    inst = parse_instance(out)
    assert (inst.graph.vertex_count, inst.graph.edge_count, len(inst.terminal_sets)) == (7, 9, 0)


def test_gen_to_file(capsys: Any, tmp_path: pathlib.Path) -> None:
    out = tmp_path / "random.gstp"
    assert run(capsys, "gen", "random", "6", "7", "2", "--seed", "3", "--out", str(out))[0] == 0
    expected = format_instance(
        families.random_instance(6, 7, 2, seed=3), comment="random 6 7 2 seed 3"
    )
    assert out.read_text() == expected


def test_gen_refuses_multigraphs(capsys: Any) -> None:
    code, _, err = run(capsys, "gen", "star_spokes", "2", "3")
    assert code == 1
    assert "multigraph" in err


def test_solve_and_verify_the_witness(capsys: Any, k4: str, tmp_path: pathlib.Path) -> None:
    code, out, _ = run(capsys, "solve", k4, "--algo", "oracle")
    assert code == 0
    assert out.splitlines() == ["FEASIBLE"]

    code, out, _ = run(capsys, "solve", k4, "--algo", "auto", "--witness")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p sol 2"
    assert lines[-1] == "FEASIBLE"
    witness = tmp_path / "k4.sol"
    witness.write_text(out)
    code, out, _ = run(capsys, "verify", k4, str(witness))
    assert (code, out) == (0, "VALID\n")


def test_solve_with_a_given_decomposition(capsys: Any, k4: str, tmp_path: pathlib.Path) -> None:
    td = tmp_path / "k4.td"
    td.write_text("p td 1 0\nb 0 0 1 2 3\n")
    code, out, _ = run(capsys, "solve", k4, "--algo", "twdp", "--td", str(td), "--witness")
    assert code == 0
    assert out.splitlines()[-1] == "FEASIBLE"
    code, _, err = run(capsys, "solve", k4, "--algo", "oracle", "--td", str(td))
    assert code == 1
    assert "only applies to --algo twdp" in err


def test_infeasible_verdict_still_succeeds(capsys: Any, tmp_path: pathlib.Path) -> None:
    path = tmp_path / "k4d3.gstp"
    path.write_text(format_instance(GstpInstance(families.complete(4), [range(4)], [3])))
    code, out, _ = run(capsys, "solve", str(path), "--algo", "oracle")
    assert code == 0
    assert out.splitlines()[-1] == "INFEASIBLE"


def test_caps(capsys: Any, k4: str, tmp_path: pathlib.Path) -> None:
    code, _, err = run(capsys, "solve", k4, "--algo", "oracle", "--oracle-edges", "3")
    assert code == 2
    assert "oracle_edges" in err
    caps = tmp_path / "caps.txt"
    caps.write_text("# tight oracle\noracle_edges 3\n")
    assert run(capsys, "solve", k4, "--algo", "oracle", "--caps", str(caps))[0] == 2
    code, out, _ = run(
        capsys, "solve", k4, "--algo", "oracle", "--caps", str(caps), "--oracle-edges", "10"
    )
    assert code == 0
    assert out.splitlines()[-1] == "FEASIBLE"


def test_parse_errors_name_the_line(capsys: Any, tmp_path: pathlib.Path) -> None:
    path = tmp_path / "broken.gstp"
    path.write_text("p gstp 3 1 0\nc fine\ne 0 7\n")
    code, _, err = run(capsys, "solve", str(path))
    assert code == 1
    assert "line 3:" in err


def test_usage_errors_exit_with_one(capsys: Any, k4: str) -> None:
    with pytest.raises(SystemExit) as info:
        main(["solve", k4, "--algo", "magic"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["bench", "--algos", "oracle,magic"])
    assert info.value.code == 1


def test_verify_reports_violations(capsys: Any, k4: str, tmp_path: pathlib.Path) -> None:
    solution = tmp_path / "short.sol"
    solution.write_text("p sol 1\nf 0 0 1\n")
    code, out, _ = run(capsys, "verify", k4, str(solution))
    assert code == 0
    assert out.startswith("INVALID: part 0")


def test_augment_and_params(capsys: Any, tmp_path: pathlib.Path) -> None:
    pairs = tmp_path / "pairs.gstp"
    pairs.write_text(format_instance(families.star_pairs(3)))
    windmill = tmp_path / "windmill.graph"
    assert run(capsys, "augment", str(pairs), "vertex", "--out", str(windmill))[0] == 0
    assert "c aug 0 4" in windmill.read_text()
    assert run(capsys, "params", str(windmill), "vc")[:2] == (0, "4\n")

    triangles = tmp_path / "triangles.gstp"
    triangles.write_text(format_instance(families.triangles(2)))
    code, out, _ = run(capsys, "augment", str(triangles), "clique")
    assert code == 0
    clique = tmp_path / "triangles.graph"
    clique.write_text(out)
    assert run(capsys, "params", str(clique), "fen")[1] == "2\n"
    assert run(capsys, "params", str(triangles), "fen")[1] == "0\n"


def test_bench_is_reproducible(capsys: Any) -> None:
    code, first, _ = run(capsys, "bench", "--count", "8", "--seed", "2")
    assert code == 0
    assert first.split()[:4] == ["pair", "instances", "agreements", "disagreements"]
    assert first.splitlines()[1].split()[0] == "oracle/twdp"
    assert run(capsys, "bench", "--count", "8", "--seed", "2", "--jobs", "2")[1] == first


def test_solve_dumps_the_selector_program(capsys: Any, tmp_path: pathlib.Path) -> None:
    path = tmp_path / "path.gstp"
    path.write_text(format_instance(GstpInstance(families.path(3), [[0, 2]], [1])))
    program = tmp_path / "selector.lp"
    code, out, _ = run(capsys, "solve", str(path), "--algo", "fnilp", "--dump-ilp", str(program))
    assert (code, out) == (0, "FEASIBLE\n")
    assert program.read_text().startswith("var ")
    assert run(capsys, "solve", str(path), "--algo", "oracle", "--dump-ilp", str(program))[0] == 1
