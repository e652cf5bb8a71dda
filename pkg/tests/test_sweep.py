"""Sweep harness: grid parsing, cell evaluation, determinism, flip location."""

import numpy as np
import pytest

from joneses import classify, constant_schedule, locate_regime_flip, simulate
from joneses.errors import ValidationError
from joneses.scenario import parse_scenario
from joneses.sweep import load_grid, parse_grid, run_sweep
from support import BASELINE, UNIT_ENVY


def template(initial=None):
    return {
        "params": {"alpha": 1 / 3, "delta": 1.0, "phi": 0.1, "n_agents": 4},
        "envy": {"base": 0.0, "scale": 1.0},
        "initial": {"values": initial or [0.4, 0.0, 0.0, 0.0]},
        "schedule": {"segments": [{"start": 0, "nu": 1.0}]},
        "run": {"horizon": 120, "tol": 1e-8},
    }


class TestParseGrid:
    def test_valid(self):
        grid = parse_grid(
            {"template": template(), "axes": [{"name": "nu", "values": [0.8, 1.0]}]}
        )
        assert grid.shape == (2,) and grid.n_cells == 2

    def test_unknown_axis(self):
        with pytest.raises(ValidationError):
            parse_grid(
                {"template": template(), "axes": [{"name": "beta", "values": [1]}]}
            )

    def test_cell_cap(self):
        with pytest.raises(ValidationError):
            parse_grid(
                {
                    "template": template(),
                    "axes": [{"name": "nu", "values": [0.8, 0.9, 1.0]}],
                    "cap": 2,
                }
            )

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "grid.json"
        path.write_text(
            '{"template": %s, "axes": [{"name": "nu", "values": [1.0]}]}'
            % __import__("json").dumps(template())
        )
        assert load_grid(path).n_cells == 1


class TestRunSweep:
    def test_single_cell_matches_direct_calls(self, tmp_path):
        grid = parse_grid(
            {"template": template(), "axes": [{"name": "nu", "values": [1.0]}]}
        )
        results = run_sweep(grid, tmp_path)
        assert len(results) == 1
        cell = results[0]
        sc = parse_scenario(template())
        regime = classify(sc.initial, 1.0, sc.params, sc.envy)
        traj = simulate(sc.initial, constant_schedule(1.0, sc.params), 120, sc.params, sc.envy)
        assert cell.regime == regime.kind == "polarised"
        assert cell.limit_k == regime.limit_k
        assert cell.k_final == traj.final_k
        header, row = (tmp_path / "sweep.csv").read_text().splitlines()
        assert header == "nu,regime,rich_count,limit_k,k_final,gap,error"
        assert row.startswith("1,polarised,1,")

    def test_regime_flips_once_along_nu_axis(self, tmp_path):
        # gamma0 = 0.7 start: flip at nu = 2/0.7 - 2 ~ 0.857
        init = [0.95, 0.05 / 3, 0.05 / 3, 0.05 / 3]
        values = list(np.linspace(0.75, 1.0, 21))
        grid = parse_grid(
            {
                "template": template(init),
                "axes": [{"name": "nu", "values": values}],
            }
        )
        results = run_sweep(grid, tmp_path)
        kinds = [r.regime for r in results]
        flips = sum(1 for a, b in zip(kinds, kinds[1:]) if a != b)
        assert flips == 1
        boundary = 2 / 0.7 - 2
        for r in results:
            expected = "polarised" if r.values[0] > boundary else "egalitarian"
            assert r.regime == expected

    def test_envy_scale_axis_has_monotone_boundary(self, tmp_path):
        init = [0.95, 0.05 / 3, 0.05 / 3, 0.05 / 3]  # gini 0.7
        values = [round(0.2 + 0.2 * i, 1) for i in range(15)]  # 0.2 .. 3.0
        grid = parse_grid(
            {
                "template": template(init),
                "axes": [{"name": "envy_scale", "values": values}],
            }
        )
        results = run_sweep(grid, tmp_path)
        kinds = []
        for r in results:
            # scales that break the existence bound are error cells by design
            kinds.append(r.regime)
        valid = [k for k in kinds if k != "error"]
        flips = sum(1 for a, b in zip(valid, valid[1:]) if a != b)
        assert flips == 1
        assert valid[0] == "egalitarian" and valid[-1] == "polarised"
        # gamma0 = 0.7 * scale crosses gamma_star(1) = 2/3 at scale ~ 0.952
        for r in results:
            if r.regime == "error":
                continue
            expected = "polarised" if 0.7 * r.values[0] > 2 / 3 else "egalitarian"
            assert r.regime == expected

    def test_error_cells_recorded_not_raised(self, tmp_path):
        grid = parse_grid(
            {
                "template": template(),
                "axes": [{"name": "envy_scale", "values": [1.0, 5.0]}],
            }
        )
        results = run_sweep(grid, tmp_path)
        assert results[0].error is None
        assert results[1].regime == "error"
        assert "ceiling" in results[1].error
        rows = (tmp_path / "sweep.csv").read_text().splitlines()
        assert len(rows) == 3  # header + both cells

    def test_two_axis_row_count_and_order(self, tmp_path):
        grid = parse_grid(
            {
                "template": template(),
                "axes": [
                    {"name": "nu", "values": [0.8, 1.0]},
                    {"name": "envy_scale", "values": [0.5, 1.0, 1.5]},
                ],
            }
        )
        results = run_sweep(grid, tmp_path)
        assert len(results) == 6
        assert [r.values for r in results] == [
            (0.8, 0.5),
            (0.8, 1.0),
            (0.8, 1.5),
            (1.0, 0.5),
            (1.0, 1.0),
            (1.0, 1.5),
        ]

    def test_gini_axis_drives_the_start_distribution(self, tmp_path):
        grid = parse_grid(
            {
                "template": template(),
                "axes": [{"name": "gini0", "values": [0.0, 0.5, 0.7]}],
            }
        )
        results = run_sweep(grid, tmp_path)
        # threshold at nu=1 is 2/3: only the 0.7 start polarises
        assert [r.regime for r in results] == ["egalitarian", "egalitarian", "polarised"]

    def test_technology_and_preference_axes(self, tmp_path):
        grid = parse_grid(
            {
                "template": template([0.1, 0.1, 0.1, 0.1]),
                "axes": [
                    {"name": "alpha", "values": [0.3, 0.4]},
                    {"name": "delta", "values": [0.8, 1.2]},
                ],
            }
        )
        results = run_sweep(grid, tmp_path)
        assert all(r.regime == "egalitarian" for r in results)
        assert all(r.gap < 1e-8 for r in results)

    def test_phi_axis_invalidating_template_nu_yields_error_rows(self, tmp_path):
        # phi = 0.25 narrows the admissible segment to [0.25, 1.6] around
        # alpha = 1/3; the template's nu = 1.0 stays valid, but phi = 0.34
        # breaks the capital-share bound entirely
        grid = parse_grid(
            {
                "template": template([0.1, 0.1, 0.1, 0.1]),
                "axes": [{"name": "phi", "values": [0.25, 0.34]}],
            }
        )
        results = run_sweep(grid, tmp_path)
        assert results[0].error is None
        assert results[1].regime == "error"

    def test_parallel_execution_is_byte_identical(self, tmp_path):
        init = [0.95, 0.05 / 3, 0.05 / 3, 0.05 / 3]
        spec = {
            "template": template(init),
            "axes": [{"name": "nu", "values": list(np.linspace(0.72, 1.15, 12))}],
        }
        run_sweep(parse_grid(spec), tmp_path / "serial", workers=1)
        run_sweep(parse_grid(spec), tmp_path / "parallel", workers=4)
        assert (tmp_path / "serial/sweep.csv").read_bytes() == (
            tmp_path / "parallel/sweep.csv"
        ).read_bytes()


class TestLocateRegimeFlip:
    def test_finds_analytic_breakpoint(self):
        init = np.array([0.95, 0.05 / 3, 0.05 / 3, 0.05 / 3])
        flip = locate_regime_flip(
            init, BASELINE, UNIT_ENVY, BASELINE.nu_lower, BASELINE.nu_upper
        )
        assert flip == pytest.approx(2 / 0.7 - 2, abs=1e-9)

    def test_requires_proper_bracket(self):
        init = np.array([0.4, 0.0, 0.0, 0.0])  # polarised on the whole segment
        with pytest.raises(ValidationError):
            locate_regime_flip(
                init, BASELINE, UNIT_ENVY, BASELINE.nu_lower, BASELINE.nu_upper
            )
