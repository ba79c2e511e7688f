import csv
import json

import numpy as np
import pytest

from helpers import MockVlmServer, synthetic_image
from scmix.cli import main
from scmix.images import load_image, save_png
from test_harness import LABELS, echo_gold, exact_record, write_manifest


@pytest.fixture
def image_dir(tmp_path):
    d = tmp_path / "inputs"
    d.mkdir()
    for i in range(3):
        save_png(synthetic_image(i, 72, 72), d / f"img{i}.png")
    return d


class TestDistortCommand:
    def test_single_file_naming(self, tmp_path, image_dir):
        out = tmp_path / "out"
        code = main([
            "distort", str(image_dir / "img0.png"),
            "--variant", "scmix-1", "--degree", "8", "--out", str(out),
        ])
        assert code == 0
        assert (out / "img0__scmix-1__d8.png").is_file()

    def test_directory_input(self, tmp_path, image_dir):
        out = tmp_path / "out"
        code = main([
            "distort", str(image_dir),
            "--variant", "ostwald-checker", "--degree", "4", "--out", str(out),
        ])
        assert code == 0
        files = sorted(p.name for p in out.iterdir())
        assert files == [
            f"img{i}__ostwald-checker__d4.png" for i in range(3)
        ]

    def test_degree_one_byte_identical_rasters(self, tmp_path, image_dir):
        out = tmp_path / "out"
        code = main([
            "distort", str(image_dir),
            "--variant", "ostwald-random", "--degree", "1", "--out", str(out),
        ])
        assert code == 0
        for i in range(3):
            a = load_image(image_dir / f"img{i}.png")
            b = load_image(out / f"img{i}__ostwald-random__d1.png")
            assert np.array_equal(a, b)

    def test_undecodable_input_partial_failure(self, tmp_path, image_dir, capsys):
        bad = image_dir / "broken.png"
        bad.write_bytes(b"not a png")
        out = tmp_path / "out"
        code = main([
            "distort", str(image_dir),
            "--variant", "scmix-2", "--degree", "3", "--out", str(out),
        ])
        assert code == 1
        assert "broken.png" in capsys.readouterr().err
        assert len(list(out.iterdir())) == 3  # the good ones still produced

    def test_unknown_variant_usage_error(self, image_dir, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["distort", str(image_dir), "--variant", "bogus",
                  "--degree", "2", "--out", str(tmp_path / "o")])
        assert exc.value.code == 2


class TestPreprocessCommand:
    def test_down_up_preserves_size(self, tmp_path):
        src = tmp_path / "src"
        src.mkdir()
        save_png(synthetic_image(5, 360, 360), src / "a.png")
        out = tmp_path / "out"
        code = main([
            "preprocess", str(src / "a.png"), "--down-up", "8",
            "--out", str(out),
        ])
        assert code == 0
        assert load_image(out / "a.png").shape == (360, 360, 3)

    def test_blur_one_is_identity(self, tmp_path, image_dir):
        out = tmp_path / "out"
        code = main([
            "preprocess", str(image_dir / "img0.png"), "--box-blur", "1",
            "--out", str(out),
        ])
        assert code == 0
        assert np.array_equal(
            load_image(out / "img0.png"), load_image(image_dir / "img0.png")
        )

    def test_even_blur_usage_error(self, tmp_path, image_dir, capsys):
        code = main([
            "preprocess", str(image_dir / "img0.png"), "--box-blur", "4",
            "--out", str(tmp_path / "out"),
        ])
        assert code == 2
        assert "odd" in capsys.readouterr().err

    def test_no_steps_usage_error(self, tmp_path, image_dir):
        code = main([
            "preprocess", str(image_dir / "img0.png"), "--out",
            str(tmp_path / "out"),
        ])
        assert code == 2

    def test_chaining_order_respected(self, tmp_path, image_dir):
        from scmix.preprocess import box_blur, down_up

        src = image_dir / "img0.png"
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert main(["preprocess", str(src), "--down-up", "4",
                     "--box-blur", "5", "--out", str(out_a)]) == 0
        assert main(["preprocess", str(src), "--box-blur", "5",
                     "--down-up", "4", "--out", str(out_b)]) == 0
        img = load_image(src)
        expect_a = box_blur(down_up(img, 4), 5)
        expect_b = down_up(box_blur(img, 5), 4)
        assert np.array_equal(load_image(out_a / "img0.png"), expect_a)
        assert np.array_equal(load_image(out_b / "img0.png"), expect_b)
        assert not np.array_equal(expect_a, expect_b)

    def test_unknown_flag_is_error(self, tmp_path, image_dir):
        with pytest.raises(SystemExit) as exc:
            main(["preprocess", str(image_dir / "img0.png"),
                  "--sharpen", "3", "--out", str(tmp_path / "o")])
        assert exc.value.code == 2


class TestHelp:
    @pytest.mark.parametrize(
        "command,expected_flags",
        [
            ("distort", ["--variant", "--degree", "--seed", "--out"]),
            ("preprocess", ["--down-up", "--box-blur", "--out"]),
            ("sweep", ["--config", "--manifest", "--variants", "--degrees",
                       "--preprocess", "--seed", "--out"]),
            ("aggregate", ["--out"]),
            ("similarity", ["--manifest", "--distorted-root", "--variants",
                            "--degrees", "--embeddings", "--workers",
                            "--out-dir"]),
        ],
    )
    def test_subcommand_help_lists_flags(self, command, expected_flags, capsys):
        with pytest.raises(SystemExit) as exc:
            main([command, "--help"])
        assert exc.value.code == 0
        text = capsys.readouterr().out
        for flag in expected_flags:
            assert flag in text


class TestSweepCommand:
    def _config(self, tmp_path, server, manifest_path, **overrides):
        config = {
            "dataset": {"manifest": str(manifest_path), "name": "animals"},
            "endpoint": {
                "base_url": server.base_url,
                "model_name": "mock-model",
                "max_in_flight": 4,
                "retry": {"max_attempts": 2, "backoff_base": 0.01},
            },
            "variants": ["scmix-1", "ostwald-checker"],
            "degrees": [1, 5],
            "preprocess": ["none"],
            "seed": 0,
            "output": str(tmp_path / "results.jsonl"),
        }
        config.update(overrides)
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        return path

    def _dataset(self, tmp_path):
        imgdir = tmp_path / "imgs"
        imgdir.mkdir()
        records = []
        for image_id, label in LABELS.items():
            path = imgdir / f"{image_id}.png"
            save_png(synthetic_image(hash(image_id) % 100, 90, 90), path)
            records.append(exact_record(image_id, path, label))
        mpath = tmp_path / "animals.jsonl"
        write_manifest(mpath, records)
        return mpath

    def test_sweep_then_aggregate(self, tmp_path, capsys):
        mpath = self._dataset(tmp_path)
        with MockVlmServer(echo_gold) as server:
            cfg = self._config(tmp_path, server, mpath)
            assert main(["sweep", "--config", str(cfg)]) == 0
        results = tmp_path / "results.jsonl"
        agg = tmp_path / "agg.csv"
        assert main(["aggregate", str(results), "--out", str(agg)]) == 0
        with open(agg) as fh:
            rows = list(csv.DictReader(fh))
        # one row per (variant, degree)
        assert len(rows) == 4
        assert all(float(r["accuracy"]) == 1.0 for r in rows)
        assert {r["model"] for r in rows} == {"mock-model"}

    def test_flag_overrides(self, tmp_path):
        mpath = self._dataset(tmp_path)
        override_out = tmp_path / "other.jsonl"
        with MockVlmServer(echo_gold) as server:
            cfg = self._config(tmp_path, server, mpath)
            assert main([
                "sweep", "--config", str(cfg),
                "--variants", "scmix-2", "--degrees", "3",
                "--out", str(override_out),
            ]) == 0
        from scmix.harness import read_results

        rows = read_results(override_out)
        assert {r.variant for r in rows} == {"scmix-2"}
        assert {r.degree for r in rows} == {1, 3}

    def test_bad_config_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["sweep", "--config", str(bad)]) == 2

    def test_missing_manifest_exit_code(self, tmp_path):
        with MockVlmServer(echo_gold) as server:
            cfg = self._config(
                tmp_path, server, tmp_path / "absent.jsonl"
            )
            assert main(["sweep", "--config", str(cfg)]) == 2


class TestAggregateCommand:
    def test_missing_results_config_error(self, tmp_path):
        assert main(["aggregate", str(tmp_path / "nope.jsonl"),
                     "--out", str(tmp_path / "agg.csv")]) == 2

    def test_empty_results_warning_but_success(self, tmp_path, capsys):
        results = tmp_path / "empty.jsonl"
        results.write_text("")
        assert main(["aggregate", str(results),
                     "--out", str(tmp_path / "agg.csv")]) == 0
        assert "no rows" in capsys.readouterr().err


class TestSimilarityCommand:
    def _dataset(self, tmp_path):
        imgdir = tmp_path / "imgs"
        imgdir.mkdir()
        records = []
        for i in range(2):
            image_id = f"img{i}"
            path = imgdir / f"{image_id}.png"
            save_png(synthetic_image(80 + i, 72, 72), path)
            records.append(exact_record(image_id, path, "cat"))
        mpath = tmp_path / "set.jsonl"
        write_manifest(mpath, records)
        distorted = tmp_path / "distorted"
        assert main(["distort", str(imgdir), "--variant", "ostwald-checker",
                     "--degree", "1", "--out", str(distorted)]) == 0
        assert main(["distort", str(imgdir), "--variant", "ostwald-checker",
                     "--degree", "6", "--out", str(distorted)]) == 0
        return mpath, distorted

    def test_without_embeddings(self, tmp_path):
        mpath, distorted = self._dataset(tmp_path)
        out_dir = tmp_path / "report"
        code = main([
            "similarity", "--manifest", str(mpath),
            "--distorted-root", str(distorted),
            "--variants", "ostwald-checker", "--degrees", "1,6",
            "--out-dir", str(out_dir),
        ])
        assert code == 0
        with open(out_dir / "similarity.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 8  # 2 img x 2 degrees x {ssim, hist_corr}
        assert {r["metric"] for r in rows} == {"ssim", "hist_corr"}

    def test_with_embeddings(self, tmp_path):
        mpath, distorted = self._dataset(tmp_path)
        epath = tmp_path / "emb.jsonl"
        with open(epath, "w") as fh:
            for i in range(2):
                for stem in (f"img{i}", f"img{i}__ostwald-checker__d1",
                             f"img{i}__ostwald-checker__d6"):
                    for enc in ("enc-a", "enc-b"):
                        fh.write(json.dumps({
                            "image_id": stem, "encoder_id": enc,
                            "pooling": "mean", "dim": 3,
                            "vector": [1.0, 2.0, 3.0],
                        }) + "\n")
        out_dir = tmp_path / "report"
        code = main([
            "similarity", "--manifest", str(mpath),
            "--distorted-root", str(distorted),
            "--variants", "ostwald-checker", "--degrees", "1,6",
            "--embeddings", str(epath), "--out-dir", str(out_dir),
        ])
        assert code == 0
        with open(out_dir / "similarity.csv") as fh:
            rows = list(csv.DictReader(fh))
        cosine_rows = [r for r in rows if r["metric"] == "cosine"]
        assert len(cosine_rows) == 8  # 2 img x 2 degrees x 2 encoders
        assert {r["encoder_id"] for r in cosine_rows} == {"enc-a", "enc-b"}

    def test_missing_cells_partial_exit(self, tmp_path, capsys):
        mpath, distorted = self._dataset(tmp_path)
        code = main([
            "similarity", "--manifest", str(mpath),
            "--distorted-root", str(distorted),
            "--variants", "ostwald-checker", "--degrees", "1,6,9",
            "--out-dir", str(tmp_path / "report"),
        ])
        assert code == 1
        assert "d9" in capsys.readouterr().err

    def test_malformed_embeddings_fatal(self, tmp_path, capsys):
        mpath, distorted = self._dataset(tmp_path)
        epath = tmp_path / "emb.jsonl"
        epath.write_text('{"image_id": "x"}\n')
        code = main([
            "similarity", "--manifest", str(mpath),
            "--distorted-root", str(distorted),
            "--variants", "ostwald-checker", "--degrees", "1",
            "--embeddings", str(epath), "--out-dir", str(tmp_path / "r"),
        ])
        assert code == 2
        assert "line 1" in capsys.readouterr().err
