import json

import pytest

from litkg.config import (
    DEFAULT_ANCHOR,
    ReferenceSnapshot,
    load_config,
    packaged_blocklist_path,
    read_blocklist,
    sha256_of,
)
from litkg.errors import ConfigError


class TestLoadConfig:
    def test_defaults(self):
        config = load_config(env={})
        assert config.anchor == DEFAULT_ANCHOR
        assert config.centrality.damping == 0.85
        assert config.retrieval.max_articles == 2000
        assert config.filters.lo_conf_min_pubs == 4

    def test_file_values(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(
            json.dumps(
                {
                    "anchor": "MESH:X",
                    "top_k": 10,
                    "filters": {"hi_conf_threshold": 0.8},
                    "centrality": {"damping": 0.5},
                    "retrieval": {"max_articles": 100},
                }
            )
        )
        config = load_config(path, env={})
        assert config.anchor == "MESH:X"
        assert config.top_k == 10
        assert config.filters.hi_conf_threshold == 0.8
        assert config.centrality.damping == 0.5
        assert config.retrieval.max_articles == 100

    def test_env_overrides_file(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"anchor": "MESH:X", "seed": 1}))
        config = load_config(
            path, env={"LITKG_ANCHOR": "MESH:Y", "LITKG_SEED": "7", "LITKG_DAMPING": "0.6"}
        )
        assert config.anchor == "MESH:Y"
        assert config.seed == 7
        assert config.centrality.damping == 0.6

    def test_cli_overrides_env(self, tmp_path):
        config = load_config(
            None, env={"LITKG_ANCHOR": "MESH:Y"}, overrides={"anchor": "MESH:Z"}
        )
        assert config.anchor == "MESH:Z"

    def test_missing_file(self):
        with pytest.raises(ConfigError) as err:
            load_config("/does/not/exist.json", env={})
        assert "/does/not/exist.json" in str(err.value)

    def test_bad_env_value(self):
        with pytest.raises(ConfigError):
            load_config(None, env={"LITKG_SEED": "not-an-int"})

    def test_nonexistent_configured_paths_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"raw_relations_path": "/missing/relations.json"}))
        with pytest.raises(ConfigError) as err:
            load_config(path, env={})
        assert "raw_relations_path" in str(err.value)

    def test_blocklist_feeds_filter_policy(self, tmp_path):
        blocklist = tmp_path / "block.txt"
        blocklist.write_text("# v2\nWater\nDust\n")
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"blocklist_path": str(blocklist)}))
        config = load_config(path, env={})
        assert config.filters.generic_blocklist == frozenset({"Water", "Dust"})


class TestBlocklistResource:
    def test_packaged_blocklist_has_named_examples(self):
        names = read_blocklist(packaged_blocklist_path())
        assert {"Death", "Disease", "Fat", "Water"} <= names

    def test_default_config_picks_it_up(self):
        config = load_config(env={})
        assert "Water" in config.filters.generic_blocklist


class TestChecksums:
    def test_drift_detected(self, tmp_path):
        f = tmp_path / "ref.tsv"
        f.write_text("data v1")
        pinned = sha256_of(f)
        snap = ReferenceSnapshot(path=str(f), kind="gene_gene", sha256=pinned)
        assert snap.drift() is None
        f.write_text("data v2")
        drift = snap.drift()
        assert drift and "drifted" in drift

    def test_unpinned_snapshot_never_drifts(self, tmp_path):
        f = tmp_path / "ref.tsv"
        f.write_text("data")
        assert ReferenceSnapshot(path=str(f), kind="gene_gene").drift() is None


def test_reference_date_parsed_from_iso_string(tmp_path):
    import datetime as dt
    import json as _json

    path = tmp_path / "c.json"
    path.write_text(_json.dumps({"retrieval": {"reference_date": "2024-06-01"}}))
    config = load_config(path, env={})
    assert config.retrieval.reference_date == dt.date(2024, 6, 1)
    assert config.retrieval.window_start() == dt.date(2019, 6, 1)
