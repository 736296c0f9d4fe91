from main import main
from tests.test_harness import TINY


class TestCli:
    def test_label(self, capsys):
        assert main(["label", "There is mild pulmonary edema."]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "atypical"
        assert "mild" in out[1]

    def test_label_needs_text(self):
        assert main(["label"]) == 1

    def test_losscurves(self, tmp_path):
        assert main(["--out", str(tmp_path), "losscurves", "--taus", "0.3", "--step", "0.1"]) == 0
        lines = (tmp_path / "loss_curves.csv").read_text().splitlines()
        assert lines[0] == "s,CE,PCE@0.3"
        assert len(lines) == 11

    def test_run_requires_config(self):
        assert main(["run"]) == 1

    def test_run_and_boundary(self, tmp_path):
        config = tmp_path / "exp.toml"
        config.write_text(TINY.format(workers=1))
        out = tmp_path / "out"
        assert main(["--config", str(config), "--out", str(out), "--seed-override", "4", "run"]) == 0
        assert (out / "results.csv").exists()
        assert (out / "runs" / "PU-RM" / "seed4" / "best.ckpt").exists()

        ckpt = out / "runs" / "PU-RM" / "seed4" / "best.ckpt"
        assert main(["--out", str(out), "boundary", "--checkpoint", str(ckpt), "--resolution", "5"]) == 0
        assert len((out / "boundary.csv").read_text().splitlines()) == 26

    def test_bad_bounds(self, tmp_path):
        assert main(["--out", str(tmp_path), "boundary", "--checkpoint", "x", "--bounds", "1,2"]) == 1

    def test_missing_checkpoint(self, tmp_path):
        assert main(["--out", str(tmp_path), "boundary", "--checkpoint", str(tmp_path / "none")]) == 1

    def test_gen(self, tmp_path):
        assert main(["--out", str(tmp_path), "--seed-override", "2", "gen", "--noise-rate", "0.1"]) == 0
        assert len((tmp_path / "train.jsonl").read_text().splitlines()) == 2000
        assert len((tmp_path / "val.jsonl").read_text().splitlines()) == 2000

    def test_gen_rejects_bad_noise_rate(self, tmp_path):
        assert main(["--out", str(tmp_path), "gen", "--noise-rate", "1.5"]) == 1
