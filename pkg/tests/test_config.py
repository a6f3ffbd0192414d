"""TOML campaign configuration parsing."""
from __future__ import annotations

import pytest

from nameforge.config import CampaignConfig, ConfigError, load_config, parse_config

FULL = """
[corpus]
path = "corpus.jsonl"
out_dir = "results"

[endpoint]
base_url = "http://127.0.0.1:9000"
timeout = 12.5
max_retries = 2
max_in_flight = 4
cache_path = "cache.jsonl"

[attack]
kind = "ga"
size_population = 10
max_iterations = 8
crossover_prob = 0.8
mutation_prob = 0.01
early_stop = 2
repeats = 3
seed = 99
max_candidates = 4
workers = 2

[defense]
top_k = 5
lambda = 0.3
index_path = "index.json"
neural = true

[metrics]
codebleu_weights = [0.1, 0.2, 0.3, 0.4]

[executor]
command = ["python3", "{path}"]
timeout = 2.0
"""


def write_config(tmp_path, text=FULL, with_corpus=True):
    p = tmp_path / "campaign.toml"
    p.write_text(text, encoding="utf-8")
    if with_corpus:
        (tmp_path / "corpus.jsonl").write_text("", encoding="utf-8")
    return p


def test_full_config_round_trip(tmp_path):
    cfg = load_config(write_config(tmp_path))
    assert cfg.corpus_path == tmp_path / "corpus.jsonl"
    assert cfg.out_dir == tmp_path / "results"
    assert cfg.endpoint.base_url == "http://127.0.0.1:9000"
    assert cfg.endpoint.timeout == 12.5
    assert cfg.endpoint.cache_path == tmp_path / "cache.jsonl"
    assert cfg.attack_kind == "ga"
    assert cfg.ga.size_population == 10
    assert cfg.ga.rng_seed == 99
    assert cfg.max_candidates == 4
    assert cfg.workers == 2
    assert cfg.retrieval.top_k == 5
    assert cfg.retrieval.fusion_lambda == 0.3
    assert cfg.index_path == tmp_path / "index.json"
    assert cfg.neural_defense
    assert cfg.codebleu_weights == (0.1, 0.2, 0.3, 0.4)
    assert cfg.executor.command == ("python3", "{path}")
    assert cfg.executor.timeout == 2.0


def test_defaults_when_sections_omitted():
    cfg = parse_config({})
    assert cfg.corpus_path is None
    assert cfg.endpoint is None
    assert cfg.ga == CampaignConfig().ga
    assert cfg.retrieval is None  # falls back to per-language defaults
    assert cfg.executor is None
    assert cfg.codebleu_weights == (0.25, 0.25, 0.25, 0.25)


def test_config_hash_is_stable_and_sensitive(tmp_path):
    a = load_config(write_config(tmp_path))
    b = load_config(write_config(tmp_path))
    assert a.hash() == b.hash()
    c = load_config(write_config(tmp_path, FULL.replace("seed = 99", "seed = 100")))
    assert a.hash() != c.hash()


@pytest.mark.parametrize(
    "mutation, fragment",
    [
        ("[corpus]\nnonsense = 1\n", "unknown key"),
        ("[surprise]\nx = 1\n", "unknown config sections"),
        ("[attack]\nkind = \"alert\"\n", "kind"),
        ("[attack]\nsize_population = 7\n", "attack"),
        ("[attack]\nworkers = 0\n", "workers"),
        ("[attack]\nmax_candidates = 0\n", "max_candidates"),
        ("[endpoint]\ntimeout = 1.0\n", "base_url"),
        ("[defense]\ntop_k = 3\n", "together"),
        ("[defense]\ntop_k = 0\nlambda = 0.5\n", "defense"),
        ("[metrics]\ncodebleu_weights = [1.0]\n", "codebleu_weights"),
        ("[executor]\ncommand = [1, 2]\n", "strings"),
        ("[corpus]\npath = 3\n", "expected"),
    ],
)
def test_invalid_configs(tmp_path, mutation, fragment):
    p = tmp_path / "bad.toml"
    p.write_text(mutation, encoding="utf-8")
    with pytest.raises(ConfigError) as err:
        load_config(p)
    assert fragment in str(err.value)


def test_missing_file_and_bad_toml(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.toml")
    bad = tmp_path / "broken.toml"
    bad.write_text("[corpus\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_referenced_paths_must_exist(tmp_path):
    p = write_config(tmp_path, with_corpus=False)
    with pytest.raises(ConfigError) as err:
        load_config(p)
    assert "corpus" in str(err.value)


def test_overrides(tmp_path):
    p = write_config(tmp_path)
    other = tmp_path / "other.jsonl"
    other.write_text("", encoding="utf-8")
    cfg = load_config(p, {"corpus": str(other), "seed": 7, "attack_kind": "foo", "out_dir": "elsewhere"})
    assert cfg.corpus_path == other
    assert cfg.ga.rng_seed == 7
    assert cfg.attack_kind == "foo"
    assert str(cfg.out_dir) == "elsewhere"
    with pytest.raises(ConfigError):
        load_config(p, {"attack_kind": "alert"})