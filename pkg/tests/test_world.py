"""Scenario generation, task windows, and config round trips."""

import math

import pytest

from hubfleet.stochastics import DegenerateDist, EpanechnikovDist, SeededRng
from hubfleet.world import (
    ConfigError,
    Hub,
    ScenarioConfig,
    Task,
    generate_initial_tasks,
    maybe_spawn_task,
    mean_travel_time,
    travel_distribution,
)


def make_cfg(**kw):
    return ScenarioConfig(**kw)


class TestTaskInvariants:
    def test_ordering_enforced(self):
        with pytest.raises(ValueError):
            Task(id=0, arrival=5, window_start=3.0, window_end=10.0, location=(0, 0))
        with pytest.raises(ValueError):
            Task(id=0, arrival=0, window_start=8.0, window_end=7.0, location=(0, 0))

    def test_status_transitions_are_monotone(self):
        t = Task(id=0, arrival=0, window_start=5.0, window_end=10.0, location=(0, 0))
        t.mark_claimed()
        t.mark_completed(at=9.0)
        with pytest.raises(ValueError):
            t.mark_expired()
        t2 = Task(id=1, arrival=0, window_start=5.0, window_end=10.0, location=(0, 0))
        t2.mark_expired()
        with pytest.raises(ValueError):
            t2.mark_completed(at=9.0)

    def test_completion_respects_deadline(self):
        t = Task(id=0, arrival=0, window_start=5.0, window_end=10.0, location=(0, 0))
        with pytest.raises(ValueError):
            t.mark_completed(at=10.5)


class TestInitialTasks:
    def test_default_count_is_ceil_1_5_n(self):
        cfg = make_cfg(n_agents=15, n_depots=5)
        tasks = generate_initial_tasks(cfg, SeededRng(0))
        assert len(tasks) == math.ceil(1.5 * 15) == 23

    def test_explicit_count(self):
        cfg = make_cfg(initial_tasks=100)
        assert len(generate_initial_tasks(cfg, SeededRng(0))) == 100

    def test_window_ranges(self):
        cfg = make_cfg(window_minutes=30.0, step_minutes=1.0, seed=4)
        w = cfg.window_steps
        for task in generate_initial_tasks(cfg.with_(initial_tasks=300), SeededRng(4)):
            assert task.arrival == 0
            assert w / 2 <= task.window_start <= w
            assert w / 2 <= task.window_end - task.window_start <= w
            assert task.arrival <= task.window_start <= task.window_end

    def test_locations_inside_box(self):
        cfg = make_cfg(conflict_level="high", initial_tasks=200)
        xmin, ymin, xmax, ymax = cfg.box()
        for task in generate_initial_tasks(cfg, SeededRng(1)):
            x, y = task.location
            assert xmin <= x <= xmax and ymin <= y <= ymax

    def test_zero_area_box_collapses_locations(self):
        cfg = make_cfg(conflict_box=(6.0, 6.0, 6.0, 6.0), initial_tasks=10)
        tasks = generate_initial_tasks(cfg, SeededRng(2))
        assert all(t.location == (6.0, 6.0) for t in tasks)

    def test_empty_box_rejected(self):
        cfg = make_cfg(conflict_box=(8.0, 0.0, 2.0, 12.0))
        with pytest.raises(ConfigError):
            generate_initial_tasks(cfg, SeededRng(0))

    def test_same_seed_regenerates_identical_tasks(self):
        cfg = make_cfg(seed=77)
        a = generate_initial_tasks(cfg, SeededRng(77))
        b = generate_initial_tasks(cfg, SeededRng(77))
        assert [(t.location, t.window_start, t.window_end) for t in a] == [
            (t.location, t.window_start, t.window_end) for t in b
        ]


class TestSpawning:
    def test_zero_probability_never_spawns(self):
        cfg = make_cfg(p_new=0.0)
        rng = SeededRng(0)
        assert all(
            maybe_spawn_task(cfg, t, rng, 0) is None for t in range(1, cfg.horizon + 1)
        )

    def test_certain_probability_always_spawns(self):
        cfg = make_cfg(p_new=1.0)
        rng = SeededRng(0)
        for t in range(1, 50):
            task = maybe_spawn_task(cfg, t, rng, t)
            assert task is not None and task.arrival == t

    def test_spawn_rate_matches_binomial(self):
        # Binomial oracle: np=5000, 3 sigma = 3*sqrt(n p (1-p)) = 150.
        cfg = make_cfg(p_new=0.5, horizon=10_000)
        rng = SeededRng(42)
        count = sum(
            maybe_spawn_task(cfg, t, rng, 0) is not None for t in range(1, 10_001)
        )
        assert abs(count - 5000) <= 150

    def test_step_outside_horizon_rejected(self):
        cfg = make_cfg()
        with pytest.raises(ValueError):
            maybe_spawn_task(cfg, 0, SeededRng(0), 0)
        with pytest.raises(ValueError):
            maybe_spawn_task(cfg, cfg.horizon + 1, SeededRng(0), 0)


class TestTravel:
    hub = Hub(id=0, location=(0.0, 0.0), sensing_radius=5.0)

    def test_mean_is_distance_over_speed(self):
        assert mean_travel_time(self.hub, (4.0, 0.0), 1.0) == pytest.approx(4.0)
        assert mean_travel_time(self.hub, (3.0, 4.0), 2.0) == pytest.approx(2.5)

    def test_zero_distance_gives_point_mass(self):
        d = travel_distribution(self.hub, (0.0, 0.0), 1.0)
        assert isinstance(d, DegenerateDist)
        assert d.cdf(0.0) == 1.0

    def test_positive_distance_gives_epanechnikov(self):
        d = travel_distribution(self.hub, (3.0, 0.0), 1.0)
        assert isinstance(d, EpanechnikovDist)
        assert d.mu == pytest.approx(3.0)
        assert d.half_width == pytest.approx(1.0)

    def test_legs_are_symmetric(self):
        # Outbound and return legs share one distribution.
        out = mean_travel_time(self.hub, (2.0, 2.0), 0.5)
        hub_at_task = Hub(id=1, location=(2.0, 2.0), sensing_radius=5.0)
        back = mean_travel_time(hub_at_task, (0.0, 0.0), 0.5)
        assert out == back

    def test_nonpositive_speed_rejected(self):
        with pytest.raises(ValueError):
            mean_travel_time(self.hub, (1.0, 0.0), 0.0)


class TestVisibility:
    def test_membership_is_closed_ball_brute_force(self):
        cfg = make_cfg(initial_tasks=120, seed=9, conflict_level="low")
        hubs = cfg.hubs()
        tasks = generate_initial_tasks(cfg, SeededRng(9))
        for hub in hubs:
            for task in tasks:
                d = math.dist(hub.location, task.location)
                assert hub.sees(task.location) == (d <= hub.sensing_radius)

    def test_overlapping_regions_share_tasks(self):
        cfg = make_cfg(conflict_level="high", initial_tasks=60, seed=3)
        hubs = cfg.hubs()
        tasks = generate_initial_tasks(cfg, SeededRng(3))
        multi = sum(
            1 for t in tasks if sum(h.sees(t.location) for h in hubs) >= 2
        )
        assert multi > 0


class TestScenarioConfig:
    def test_agents_split_equally(self):
        cfg = make_cfg(n_depots=5, n_agents=15)
        counts = {}
        for i in range(15):
            counts[cfg.agent_hub(i)] = counts.get(cfg.agent_hub(i), 0) + 1
        assert counts == {h: 3 for h in range(5)}

    def test_uneven_split_rejected(self):
        with pytest.raises(ConfigError):
            make_cfg(n_depots=5, n_agents=16).validate()

    def test_bad_probability_rejected(self):
        with pytest.raises(ConfigError):
            make_cfg(p_new=1.5).validate()

    def test_layout_presets(self):
        grid = make_cfg(n_depots=5).depot_locations()
        assert len(grid) == 5
        ring = make_cfg(n_depots=6, depot_layout="ring").depot_locations()
        assert len(ring) == 6
        cx = sum(p[0] for p in ring) / 6
        assert cx == pytest.approx(6.0)

    def test_fleet_presets_validate(self):
        for depots, agents in ((5, 15), (5, 50), (5, 100), (6, 60), (10, 100)):
            make_cfg(n_depots=depots, n_agents=agents).validate()

    def test_digest_ignores_topology_and_seed(self):
        a = make_cfg(topology="complete", seed=1)
        b = make_cfg(topology="empty", seed=99)
        c = make_cfg(p_new=0.75)
        assert a.digest() == b.digest()
        assert a.digest() != c.digest()

    def test_config_file_round_trip(self, tmp_path):
        cfg = make_cfg(
            n_depots=5,
            n_agents=15,
            p_new=0.75,
            window_minutes=45.0,
            topology="star:1",
            conflict_level="high",
            seed=31,
        )
        path = tmp_path / "scenario.ini"
        cfg.to_file(path)
        assert ScenarioConfig.from_file(path) == cfg

    def test_explicit_layout_round_trip(self, tmp_path):
        cfg = make_cfg(
            n_depots=2,
            n_agents=4,
            depot_layout=((1.0, 2.0), (10.0, 11.0)),
            conflict_box=(0.0, 0.0, 12.0, 12.0),
        )
        path = tmp_path / "scenario.ini"
        cfg.to_file(path)
        assert ScenarioConfig.from_file(path) == cfg

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[scenario]\nwarp_speed = 9\n")
        with pytest.raises(ConfigError):
            ScenarioConfig.from_file(path)

    def test_missing_file_rejected(self):
        with pytest.raises(ConfigError):
            ScenarioConfig.from_file("/nonexistent/path.ini")
