import json

import numpy as np
import pytest

from qdeg.channels import choi_from_kraus, depolarizing, rank2
from qdeg.cli import main


def write_spec(tmp_path, doc, name="chan.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def to_complex(pair):
    return complex(pair[0], pair[1])


def matrix_from_json(rows):
    return np.array([[to_complex(v) for v in row] for row in rows])


class TestClassifyCommand:
    def test_depolarizing_half(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "depolarizing", "p": 0.5})
        code, out, _ = run(capsys, ["classify", path])
        assert code == 0
        doc = json.loads(out)
        assert doc["antidegradable"]["state"] == "yes"
        assert doc["entanglement_breaking"]["state"] == "no"
        assert doc["unital"] is True

    def test_identity(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "identity"})
        code, out, _ = run(capsys, ["classify", path])
        assert code == 0
        doc = json.loads(out)
        assert doc["degradable"]["state"] == "yes"
        assert doc["antidegradable"]["state"] == "no"

    def test_non_cp_bloch_exits_2(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "bloch", "t": [0, 0, 0], "lambda": [1, 1, -1]})
        code, _, err = run(capsys, ["classify", path])
        assert code == 2
        assert "not a channel" in err

    def test_parse_failure_exits_1(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        code, _, err = run(capsys, ["classify", str(p)])
        assert code == 1 and "error" in err

    def test_unknown_kind_exits_1(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "mystery"})
        code, _, _ = run(capsys, ["classify", path])
        assert code == 1

    def test_missing_parameter_exits_1(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "depolarizing"})
        code, _, _ = run(capsys, ["classify", path])
        assert code == 1

    def test_out_of_range_parameter_exits_2(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "depolarizing", "p": 1.7})
        code, _, _ = run(capsys, ["classify", path])
        assert code == 2

    def test_kraus_input(self, tmp_path, capsys):
        ident = [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
        path = write_spec(tmp_path, {"kind": "kraus", "operators": [ident]})
        code, out, _ = run(capsys, ["classify", path])
        assert code == 0
        assert json.loads(out)["choi_rank"] == 1

    def test_csv_format(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "depolarizing", "p": 0.5})
        code, out, _ = run(capsys, ["classify", path, "--format", "csv"])
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("anti_state,anti_margin")
        assert lines[1].startswith("yes,")

    def test_deterministic_output(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "rank2", "alpha": 0.4, "beta": 1.1})
        _, out1, _ = run(capsys, ["classify", path])
        _, out2, _ = run(capsys, ["classify", path])
        assert out1 == out2


class TestConvertCommand:
    def test_depolarizing_one_to_choi(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "depolarizing", "p": 1.0})
        code, out, _ = run(capsys, ["convert", path, "--to", "choi"])
        assert code == 0
        m = matrix_from_json(json.loads(out)["matrix"])
        assert np.allclose(m, np.eye(4) / 2, atol=1e-12)

    def test_identity_kraus_to_bloch(self, tmp_path, capsys):
        ident = [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
        path = write_spec(tmp_path, {"kind": "kraus", "operators": [ident]})
        code, out, _ = run(capsys, ["convert", path, "--to", "bloch"])
        assert code == 0
        doc = json.loads(out)
        assert np.allclose(doc["t"], 0) and np.allclose(doc["lambda"], 1)

    def test_choi_to_bloch_depolarizing(self, tmp_path, capsys):
        p = 0.4
        c = choi_from_kraus(depolarizing(p)).matrix
        mat = [[[v.real, v.imag] for v in row] for row in c]
        path = write_spec(tmp_path, {"kind": "choi", "matrix": mat})
        code, out, _ = run(capsys, ["convert", path, "--to", "bloch"])
        assert code == 0
        doc = json.loads(out)
        assert np.allclose(doc["lambda"], [0.6, 0.6, 0.6], atol=1e-12)

    def test_roundtrip_kraus_choi(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "rank2", "alpha": 0.9, "beta": 0.2})
        _, out, _ = run(capsys, ["convert", path, "--to", "choi"])
        choi_doc = json.loads(out)
        path2 = write_spec(tmp_path, choi_doc, "choi.json")
        _, out2, _ = run(capsys, ["convert", path2, "--to", "kraus"])
        kraus_doc = json.loads(out2)
        path3 = write_spec(tmp_path, kraus_doc, "kraus.json")
        _, out3, _ = run(capsys, ["convert", path3, "--to", "choi"])
        m1 = matrix_from_json(choi_doc["matrix"])
        m3 = matrix_from_json(json.loads(out3)["matrix"])
        assert np.linalg.norm(m1 - m3) <= 1e-9


class TestComplementCommand:
    def test_unitary(self, tmp_path, capsys):
        ident = [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]
        path = write_spec(tmp_path, {"kind": "kraus", "operators": [ident]})
        code, out, _ = run(capsys, ["complement", path])
        assert code == 0
        doc = json.loads(out)
        assert doc["output_dim"] == 1
        ops = [matrix_from_json(op) for op in doc["operators"]]
        assert all(op.shape == (1, 2) for op in ops)
        gram = sum(op.conj().T @ op for op in ops)
        assert np.linalg.norm(gram - np.eye(2)) <= 1e-10

    def test_self_complementary_channel(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, {"kind": "named", "name": "rank2", "alpha": 0.7854, "beta": 0.7853981633974483}
        )
        code, out, _ = run(capsys, ["complement", path])
        assert code == 0
        doc = json.loads(out)
        ops = [matrix_from_json(op) for op in doc["operators"]]
        comp_choi = sum(
            np.outer(op.reshape(-1, order="F"), op.reshape(-1, order="F").conj()) for op in ops
        )
        orig = choi_from_kraus(rank2(0.7854, 0.7853981633974483)).matrix
        assert np.linalg.norm(comp_choi - orig) <= 1e-10

    def test_generic_completeness(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "rank2", "alpha": 1.2, "beta": 0.4})
        code, out, _ = run(capsys, ["complement", path])
        assert code == 0
        ops = [matrix_from_json(op) for op in json.loads(out)["operators"]]
        gram = sum(op.conj().T @ op for op in ops)
        assert np.linalg.norm(gram - np.eye(2)) <= 1e-10


class TestOracleCommand:
    def test_depolarizing_half(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "depolarizing", "p": 0.5})
        code, out, _ = run(capsys, ["oracle", path])
        assert code == 0
        doc = json.loads(out)
        assert doc["oracle"]["status"] == "feasible"
        assert doc["analytic"]["state"] == "yes"

    def test_identity(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "identity"})
        code, out, _ = run(capsys, ["oracle", path])
        assert code == 0
        doc = json.loads(out)
        assert doc["oracle"]["status"] == "infeasible"
        assert doc["analytic"]["state"] == "no"

    def test_witness_file(self, tmp_path, capsys):
        path = write_spec(tmp_path, {"kind": "named", "name": "depolarizing", "p": 0.8})
        wit_path = tmp_path / "witness.json"
        code, out, _ = run(capsys, ["oracle", path, "--out", str(wit_path)])
        assert code == 0
        doc = json.loads(wit_path.read_text())
        w = matrix_from_json(doc["witness"])
        assert w.shape == (8, 8)
        assert np.linalg.eigvalsh(w)[0] >= -1e-7


class TestSweepCommand:
    def test_rank2_sign_pattern(self, tmp_path, capsys):
        spec = {
            "family": "rank2",
            "alpha": {"min": 0.0, "max": 3.141592653589793, "steps": 24},
            "beta": {"min": 0.0, "max": 3.141592653589793, "steps": 24},
        }
        path = write_spec(tmp_path, spec)
        code, out, _ = run(capsys, ["sweep", path])
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "alpha,beta,anti_margin,deg_margin,eb_margin,anti_state,deg_state,eb_state"
        assert len(lines) == 1 + 24 * 24
        for line in lines[1:]:
            cells = line.split(",")
            a, b, margin = float(cells[0]), float(cells[1]), float(cells[2])
            ref = -np.cos(2 * a) * np.cos(2 * b)
            if abs(ref) > 1e-6:
                assert np.sign(margin) == np.sign(ref)

    def test_depolarizing_threshold_flips(self, tmp_path, capsys):
        spec = {"family": "depolarizing", "p": {"min": 0.0, "max": 1.0, "steps": 1001}}
        path = write_spec(tmp_path, spec)
        code, out, _ = run(capsys, ["sweep", path])
        assert code == 0
        lines = out.strip().split("\n")[1:]
        assert len(lines) == 1001
        anti_flip = eb_flip = None
        prev_anti = prev_eb = None
        for line in lines:
            cells = line.split(",")
            p = float(cells[0])
            anti, eb = cells[4], cells[6]
            if prev_anti in ("no",) and anti in ("yes", "boundary"):
                anti_flip = p
            if prev_eb in ("no",) and eb in ("yes", "boundary"):
                eb_flip = p
            prev_anti, prev_eb = anti, eb
        assert anti_flip is not None and abs(anti_flip - 1 / 3) <= 1e-3 + 1e-12
        assert eb_flip is not None and abs(eb_flip - 2 / 3) <= 1e-3 + 1e-12

    def test_degenerate_two_point_grid(self, tmp_path, capsys):
        spec = {"family": "depolarizing", "p": {"min": 0.0, "max": 1.0, "steps": 2}}
        path = write_spec(tmp_path, spec)
        code, out, _ = run(capsys, ["sweep", path])
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 3

    def test_unital_ray(self, tmp_path, capsys):
        spec = {
            "family": "unital",
            "direction": [1.0, 1.0, 1.0],
            "scale": {"min": 0.0, "max": 1.0, "steps": 11},
        }
        path = write_spec(tmp_path, spec)
        code, out, _ = run(capsys, ["sweep", path])
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0].startswith("scale,lambda1,lambda2,lambda3")
        assert len(lines) == 12

    def test_output_selection(self, tmp_path, capsys):
        spec = {
            "family": "depolarizing",
            "p": {"min": 0.0, "max": 1.0, "steps": 3},
            "outputs": ["anti_margin", "anti_state"],
        }
        path = write_spec(tmp_path, spec)
        code, out, _ = run(capsys, ["sweep", path])
        assert code == 0
        assert out.strip().split("\n")[0] == "p,anti_margin,anti_state"

    def test_invalid_grid_exits_1(self, tmp_path, capsys):
        spec = {"family": "depolarizing", "p": {"min": 0.0, "max": 1.0, "steps": 1}}
        path = write_spec(tmp_path, spec)
        code, _, _ = run(capsys, ["sweep", path])
        assert code == 1

    def test_csv_to_file_and_determinism(self, tmp_path, capsys):
        spec = {"family": "depolarizing", "p": {"min": 0.0, "max": 1.0, "steps": 21}}
        path = write_spec(tmp_path, spec)
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["sweep", path, "--out", str(out1)]) == 0
        assert main(["sweep", path, "--out", str(out2)]) == 0
        capsys.readouterr()
        assert out1.read_bytes() == out2.read_bytes()

    def test_states_match_classify(self, tmp_path, capsys):
        spec = {"family": "depolarizing", "p": {"min": 0.0, "max": 1.0, "steps": 11}}
        path = write_spec(tmp_path, spec)
        _, out, _ = run(capsys, ["sweep", path])
        for line in out.strip().split("\n")[1:]:
            cells = line.split(",")
            p = float(cells[0])
            chan = write_spec(tmp_path, {"kind": "named", "name": "depolarizing", "p": p}, "one.json")
            _, cls_out, _ = run(capsys, ["classify", chan])
            doc = json.loads(cls_out)
            assert doc["antidegradable"]["state"] == cells[4]
            assert doc["degradable"]["state"] == cells[5]
            assert doc["entanglement_breaking"]["state"] == cells[6]
