import math

import numpy as np
import pytest

from jensengap import CampaignConfig, random_instance, run_campaign
from jensengap.verify import DEFAULT_INEQUALITY_IDS


def small_config(**kw):
    base = dict(seed=123, trials=50,
                function_ids=("power:2", "power:3"),
                inequality_ids=DEFAULT_INEQUALITY_IDS)
    base.update(kw)
    return CampaignConfig(**base)


class TestRandomInstance:
    def test_deterministic(self):
        cfg = small_config()
        a = random_instance(cfg, 7)
        b = random_instance(cfg, 7)
        assert a == b

    def test_pinned_ranges(self):
        cfg = small_config(k_range=(1, 1), n_range=(2, 2))
        inst = random_instance(cfg, 0)
        assert inst.k == 1
        assert len(inst.groups[0][0]) == 2

    def test_validation_sweep(self):
        cfg = small_config(k_range=(1, 3), n_range=(1, 6))
        for t in range(10 ** 4):
            inst = random_instance(cfg, t)  # constructors validate
            for p, _ in inst.groups:
                assert abs(math.fsum(p.entries) - 1.0) <= 1e-12
                assert min(p.entries) > 0.0


class TestRunCampaign:
    def test_square_lower_bound_equality(self):
        cfg = small_config(
            trials=200, function_ids=("power:2",),
            inequality_ids=("lower_bound_superquadratic",))
        rep = run_campaign(cfg)
        st = rep.per_inequality["lower_bound_superquadratic"]
        assert st["violation_count"] == 0
        assert abs(st["slack_min"]) <= 1e-9
        assert st["equality_hits"] == st["count"]

    def test_superquadratic_catalog_clean(self):
        cfg = small_config(
            trials=150,
            function_ids=("power:3", "power:4", "xsqlog"))
        rep = run_campaign(cfg)
        assert rep.total_violations == 0

    def test_exp_produces_violations(self):
        cfg = small_config(
            trials=1000, function_ids=("exp",),
            inequality_ids=("lower_bound_superquadratic",))
        rep = run_campaign(cfg)
        st = rep.per_inequality["lower_bound_superquadratic"]
        assert st["violation_count"] > 0
        v = st["violations"][0]
        assert {"trial", "function", "slack", "instance"} <= set(v)

    def test_skips_counted_for_negative_functions(self):
        cfg = small_config(
            trials=30, function_ids=("neg_power_comp:2",),
            inequality_ids=("halved_bound",))
        rep = run_campaign(cfg)
        assert rep.skips["halved_bound"] == 30
        assert "halved_bound" not in rep.per_inequality

    def test_unknown_inequality_rejected(self):
        with pytest.raises(ValueError):
            small_config(inequality_ids=("no_such_bound",))

    def test_integral_check_square_tight(self):
        cfg = small_config(
            trials=100, function_ids=("power:2",),
            inequality_ids=("lower_bound_superquadratic_int",),
            node_range=(0.0, 10.0))
        rep = run_campaign(cfg)
        st = rep.per_inequality["lower_bound_superquadratic_int"]
        assert st["violation_count"] == 0
        assert abs(st["slack_min"]) <= 1e-11

    def test_sandwich_refinement_rhs_nonnegative(self):
        cfg = small_config(
            trials=200, function_ids=("power:2", "power:3", "power:4"),
            inequality_ids=("sandwich",))
        rep = run_campaign(cfg)
        assert rep.per_inequality["sandwich_lower"]["rhs_min"] >= -1e-12


class TestDeterminism:
    def test_byte_identical_reports(self):
        cfg = small_config(trials=40)
        a = run_campaign(cfg).to_json()
        b = run_campaign(cfg).to_json()
        assert a == b

    def test_config_roundtrip(self, tmp_path):
        cfg = small_config()
        path = tmp_path / "cfg.json"
        import json

        path.write_text(json.dumps(cfg.to_dict()))
        back = CampaignConfig.load(str(path))
        assert back == cfg
