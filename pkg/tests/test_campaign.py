"""Campaign loops against the live mock victim."""
from __future__ import annotations

import json
from dataclasses import replace

import pytest

from fixture_corpus import build_fixture_corpus
from nameforge.attack import GaConfig
from nameforge.campaign import (
    CampaignError,
    adversarial_to_dict,
    load_adversarial,
    run_attack_campaign,
    run_defense_campaign,
    run_eval_campaign,
    save_adversarial,
)
from nameforge.core import GenerationMode
from nameforge.defense import build_index
from nameforge.executor import ExecutorConfig
from nameforge.mockserver import MockServer
from nameforge.modelio import EndpointConfig, ModelClient

SMALL_GA = GaConfig(
    size_population=6, max_iterations=5, repeats=2, early_stop=2, rng_seed=11
)


@pytest.fixture(scope="module")
def server():
    with MockServer() as srv:
        yield srv


@pytest.fixture()
def client(server):
    with ModelClient(EndpointConfig(base_url=server.base_url, timeout=10.0)) as c:
        yield c


@pytest.fixture(scope="module")
def corpus():
    return build_fixture_corpus()


def test_attack_campaign_drops_codebleu(client, corpus):
    subset = corpus[:4]
    result = run_attack_campaign(
        subset, client, ga_cfg=SMALL_GA, max_candidates=3, workers=2
    )
    assert result.ok
    assert len(result.records) == 4
    agg = result.aggregates
    assert agg["mean_codebleu_before"] == pytest.approx(1.0)
    assert agg["mean_codebleu_after"] < 1.0
    assert agg["codebleu_drop"] > 0
    assert agg["asr_finetune"] == 1.0
    for sample, record in result.records:
        assert record.best_fitness < record.original_fitness
        assert record.adversarial_name != sample.method_name


def test_attack_campaign_rejects_bad_inputs(client):
    with pytest.raises(CampaignError):
        run_attack_campaign([], client)
    with pytest.raises(CampaignError):
        run_attack_campaign(build_fixture_corpus()[:1], client, mode=GenerationMode.FD)


def test_attack_campaign_is_deterministic(client, corpus):
    subset = corpus[:3]
    a = run_attack_campaign(subset, client, ga_cfg=SMALL_GA, max_candidates=3)
    b = run_attack_campaign(subset, client, ga_cfg=SMALL_GA, max_candidates=3)
    assert a.records == b.records
    rows_a = [adversarial_to_dict(s, r) for s, r in a.records]
    rows_b = [adversarial_to_dict(s, r) for s, r in b.records]
    assert json.dumps(rows_a) == json.dumps(rows_b)


def test_foo_campaign(client, corpus):
    result = run_attack_campaign(
        corpus[:3], client, kind="foo", ga_cfg=SMALL_GA, max_candidates=3
    )
    assert result.ok
    for _, record in result.records:
        assert record.attack_kind == "foo"
        assert record.adversarial_name == "foo"
        assert record.best_fitness < record.original_fitness


def test_random_campaign_seeded(client, corpus):
    a = run_attack_campaign(corpus[:3], client, kind="random", ga_cfg=SMALL_GA, max_candidates=3)
    b = run_attack_campaign(corpus[:3], client, kind="random", ga_cfg=SMALL_GA, max_candidates=3)
    assert [r.adversarial_name for _, r in a.records] == [
        r.adversarial_name for _, r in b.records
    ]


def test_adversarial_jsonl_round_trip(tmp_path, client, corpus):
    result = run_attack_campaign(corpus[:3], client, ga_cfg=SMALL_GA, max_candidates=3)
    path = tmp_path / "adv.jsonl"
    save_adversarial(result.records, path)
    loaded = load_adversarial(path)
    assert [(s.id, r.adversarial_name) for s, r in loaded] == [
        (s.id, r.adversarial_name) for s, r in result.records
    ]
    # original record fields stay intact
    assert loaded[0][0] == result.records[0][0]
    line = path.read_text(encoding="utf-8").splitlines()[0]
    row = json.loads(line)
    for key in ("id", "code", "adversarial_name", "original_fitness", "best_fitness", "attack_kind"):
        assert key in row


def test_load_adversarial_rejects_plain_corpus(tmp_path, corpus):
    path = tmp_path / "plain.jsonl"
    from nameforge.core import save_corpus

    save_corpus(corpus[:2], path)
    with pytest.raises(CampaignError):
        load_adversarial(path)


def test_defense_reinstates_codebleu(client, corpus):
    subset = corpus[:5]
    attack = run_attack_campaign(subset, client, ga_cfg=SMALL_GA, max_candidates=3)
    index = build_index([(s.description, s.method_name) for s in subset])
    defense = run_defense_campaign(
        attack.records, index, client, baseline=attack.aggregates
    )
    assert defense.ok
    agg = defense.aggregates
    # duplicate-description index returns the original name, so generation
    # is byte-identical to the unattacked baseline
    assert agg["name_recovery_rate"] == 1.0
    assert agg["mean_codebleu_defended"] == pytest.approx(1.0)
    assert agg["mean_codebleu_baseline"] == pytest.approx(1.0)
    assert agg["ir_fallbacks"] == 0
    for row in defense.rows:
        assert row["defended_name"] == row["original_name"]


def test_defense_requires_records(client, corpus):
    index = build_index([(corpus[0].description, corpus[0].method_name)])
    with pytest.raises(CampaignError):
        run_defense_campaign([], index, client)


def test_eval_campaign_with_executor(client, corpus):
    from nameforge.core import Language

    # pick a sample built on the sum-and-double template so the assertion holds
    summing = next(
        s for s in corpus if s.language is Language.PYTHON and s.params == ("values",)
    )
    subset = [
        replace(summing, tests=f"assert {summing.method_name}([1, 2]) == 6\n"),
        corpus[1] if corpus[1].id != summing.id else corpus[2],
    ]
    result = run_eval_campaign(
        subset, client, executor=ExecutorConfig(("python3", "{path}"))
    )
    agg = result.aggregates
    assert agg["kind"] == "baseline"
    assert agg["mean_codebleu"] == pytest.approx(1.0)
    assert agg["pass_at_1"] == 1.0  # only the sample with tests is executed
    assert agg["failures"] == 0


def test_campaign_records_per_sample_failures(corpus):
    from nameforge.mockserver import MockBehavior, MockServer as Server

    with Server(MockBehavior(fail_first=2)) as srv:
        cfg = EndpointConfig(base_url=srv.base_url, timeout=10.0, max_retries=1)
        with ModelClient(cfg) as flaky:
            result = run_eval_campaign(corpus[:3], flaky, workers=1)
    assert len(result.failures) == 2
    assert result.aggregates["scored"] == 1
    assert {f.stage for f in result.failures} == {"eval"}
