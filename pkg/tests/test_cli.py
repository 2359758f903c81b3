import re
import subprocess
import sys
from itertools import combinations

import numpy as np
import pytest

from toricseeds.cli import (
    EXIT_CAP,
    EXIT_INFEASIBLE,
    EXIT_MISSING_STRATUM,
    EXIT_OK,
    EXIT_PARSE,
    main,
)
from toricseeds.complex import PureComplex, boundary_simplex, cross_polytope, polygon
from toricseeds.formats import read_complexes, write_complexes, write_matrix
from toricseeds.seeddb import SeedDatabase

HEX_LAMBDA = np.array([[1, 0, -1, -1, 0, 1], [0, 1, 1, 0, -1, -1]])


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def all_subsets(m, n):
    return PureComplex.from_facets(combinations(range(1, m + 1), n))


class TestOrbits:
    @pytest.mark.parametrize("n,count", [(2, 7), (7, 28), (11, 1)])
    def test_counts(self, capsys, n, count):
        code, out, _ = run(capsys, "orbits", "--n", n)
        assert code == EXIT_OK
        assert out.strip().splitlines()[-1] == f"orbits n={n} p=4: {count}"

    def test_too_many(self, capsys):
        code, _, err = run(capsys, "orbits", "--n", 12)
        assert code == EXIT_PARSE and "error" in err


class TestEnumerate:
    def test_simplex_universe(self, capsys, tmp_path):
        f = tmp_path / "u.cplx"
        write_complexes(f, [boundary_simplex(3)])
        code, out, _ = run(capsys, "enumerate", "--universe", f, "--threads", 1)
        assert code == EXIT_OK and "total distinct: 1" in out

    def test_edges_of_four(self, capsys, tmp_path):
        f = tmp_path / "u.cplx"
        write_complexes(f, [all_subsets(4, 2)])
        o = tmp_path / "o.cplx"
        code, out, _ = run(capsys, "enumerate", "--universe", f, "--out", o, "--threads", 1)
        assert code == EXIT_OK and "total distinct: 7" in out
        assert len(read_complexes(o)) == 7

    def test_lambda_file(self, capsys, tmp_path):
        f = tmp_path / "hex.mat"
        write_matrix(f, HEX_LAMBDA % 2, "Z2")
        code, out, _ = run(capsys, "enumerate", "--lambda", f, "--threads", 1)
        assert code == EXIT_OK and "total distinct:" in out

    def test_threads_do_not_change_output(self, capsys, tmp_path):
        outs = []
        for w in (1, 2):
            o = tmp_path / f"o{w}.cplx"
            assert run(capsys, "enumerate", "--n", 2, "--orbit", 0, "--props", "ubt",
                       "--threads", w, "--out", o)[0] == EXIT_OK
            outs.append(o.read_text())
        assert outs[0] == outs[1]

    def test_cap(self, capsys, tmp_path):
        f = tmp_path / "u.cplx"
        write_complexes(f, [all_subsets(7, 3)])
        code, _, err = run(capsys, "enumerate", "--universe", f, "--cap", 10, "--threads", 1)
        assert code == EXIT_CAP

    def test_infeasible(self, capsys, tmp_path):
        f = tmp_path / "u.cplx"
        write_complexes(f, [all_subsets(4, 2)])
        pin = tmp_path / "pin.cplx"
        write_complexes(pin, [PureComplex(4, 2, (0b110,), embedded=True)])
        code, _, _ = run(capsys, "enumerate", "--universe", f, "--require", pin, "--forbid", pin)
        assert code == EXIT_INFEASIBLE

    def test_bad_orbit_index(self, capsys):
        assert run(capsys, "enumerate", "--n", 2, "--orbit", 99)[0] == EXIT_PARSE


class TestPipeline:
    def test_n2_counts_line(self, capsys, tmp_path):
        code, out, _ = run(capsys, "pipeline", "--n", 2, "--seed-db", tmp_path, "--threads", 1)
        assert code == EXIT_OK
        line = [l for l in out.splitlines() if l.startswith("COUNTS ")][-1]
        counts = dict(re.findall(r"(\w+)=(\d+)", line))
        assert set(counts) == {"line7", "line13", "line15", "line19", "final"}
        assert counts["line15"] == "2" and counts["line19"] == "1" and counts["final"] == "1"
        assert SeedDatabase.load(tmp_path).counts()[(2, 4)] == 1

    def test_strict_missing_stratum(self, capsys, tmp_path):
        code, _, err = run(capsys, "pipeline", "--n", 3, "--seed-db", tmp_path, "--strict")
        assert code == EXIT_MISSING_STRATUM


class TestVerify:
    def test_all(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == EXIT_OK
        assert out.count("PASS") == 4 and "FAIL" not in out

    def test_cyclic_values(self, capsys):
        _, out, _ = run(capsys, "verify", "cyclic")
        assert "n=4:20/20" in out


class TestAnalyze:
    def test_hexagon(self, capsys, tmp_path):
        f = tmp_path / "hex.cplx"
        write_complexes(f, [polygon(6)])
        lam = tmp_path / "hex.mat"
        write_matrix(lam, HEX_LAMBDA, "Z")
        code, out, _ = run(capsys, "analyze", f, "--lambda", lam)
        assert code == EXIT_OK
        assert "seed: yes" in out and "IDCM: yes" in out and "integer lift: yes" in out
        assert "optimal partition: {1,4} {2,5} {3,6}" in out

    def test_octahedron(self, capsys, tmp_path):
        f = tmp_path / "o.cplx"
        write_complexes(f, [cross_polytope(3)])
        _, out, _ = run(capsys, "analyze", f)
        assert "suspension: yes" in out

    def test_pentagon(self, capsys, tmp_path):
        f = tmp_path / "p.cplx"
        write_complexes(f, [polygon(5)])
        _, out, _ = run(capsys, "analyze", f)
        assert "MNF partitions: none" in out

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "analyze", tmp_path / "nope.cplx")[0] == EXIT_PARSE

    def test_bad_file(self, capsys, tmp_path):
        f = tmp_path / "bad.cplx"
        f.write_text("x y\n")
        assert run(capsys, "analyze", f)[0] == EXIT_PARSE


class TestEntryPoint:
    def test_bad_usage(self, capsys):
        assert run(capsys, "frobnicate")[0] == EXIT_PARSE

    def test_module_runs(self):
        proc = subprocess.run([sys.executable, "-m", "toricseeds", "orbits", "--n", "10"],
                              capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout.strip().endswith(": 3")
