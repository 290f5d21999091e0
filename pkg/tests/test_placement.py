import math

import numpy as np
import pytest

from wsn3d import data_io
from wsn3d.clustering import form_clusters
from wsn3d.placement import (
    NodeState,
    PlacementParams,
    PlacementState,
    cluster_costs,
    cost_function,
    placement_step,
    run_placement,
    select_nodes,
)


def make_state(entries, sigma_gb2=0.0):
    nodes = tuple(NodeState(node_id=i, **kw) for i, kw in entries)
    return PlacementState(nodes=nodes, sigma_gb2=sigma_gb2, round=0, cost_history=())


class TestCostFunction:
    def test_constant_readings_zero(self):
        assert cost_function([3.0, 3.0, 3.0]) == 0.0

    def test_two_point_variance(self):
        assert cost_function([0.0, 2.0]) == 2.0

    def test_identical_neighbor_doubles(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(200)
        v = np.var(x, ddof=1)
        # covariance of a series with itself is its variance
        assert cost_function(x, [x]) == pytest.approx(2.0 * v, rel=1e-12)

    def test_brute_force_covariance_oracle(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(50)
        nb = rng.standard_normal((3, 50))
        got = cost_function(x, nb)
        covs = []
        for k in range(3):
            xc, yc = x - x.mean(), nb[k] - nb[k].mean()
            covs.append(float(np.dot(xc, yc)) / (50 - 1))
        want = float(np.var(x, ddof=1)) + float(np.mean(covs))
        assert got == pytest.approx(want, rel=1e-12)

    def test_too_few_epochs_rejected(self):
        with pytest.raises(ValueError):
            cost_function([1.0])

    def test_misaligned_neighbors_rejected(self):
        with pytest.raises(ValueError):
            cost_function([1.0, 2.0], [[1.0, 2.0, 3.0]])


class TestPlacementStep:
    PARAMS = PlacementParams(phi1=0.5, phi2=0.5, rounds=10, threshold=5.0)

    def test_equilibrium_keeps_accumulator(self):
        # both attraction terms vanish, so sigma_p2 moves by exactly i_a
        state = make_state(
            [(1, dict(sigma_p2=2.0, sigma_b2=2.0, best_cost=9.0, i_a=0.25))], sigma_gb2=2.0
        )
        new = placement_step(state, {1: 1.0}, self.PARAMS)
        ns = new.nodes[0]
        assert ns.i_a == 0.25
        assert ns.sigma_p2 == 2.25

    def test_increment_formula_single_step(self):
        params = PlacementParams(phi1=0.3, phi2=0.7, rounds=10)
        state = make_state(
            [
                (1, dict(sigma_p2=2.0, sigma_b2=3.0, best_cost=9.0, i_a=0.1)),
                (2, dict(sigma_p2=1.0, sigma_b2=6.0, best_cost=11.0, i_a=0.0)),
            ],
            sigma_gb2=6.0,
        )
        new = placement_step(state, {1: 1.0, 2: 1.0}, params)
        ns = new.node(1)
        want_ia = 0.1 + 0.3 * (3.0 - 2.0) + 0.7 * (6.0 - 2.0)
        assert ns.i_a == pytest.approx(want_ia, abs=1e-15)
        assert ns.sigma_p2 == pytest.approx(2.0 + want_ia, abs=1e-15)

    def test_halfway_move_toward_global_best(self):
        params = PlacementParams(phi1=0.0, phi2=0.5, rounds=10)
        state = make_state(
            [
                (1, dict(sigma_p2=2.0, sigma_b2=2.0, best_cost=1.0, i_a=0.0)),
                (2, dict(sigma_p2=4.0, sigma_b2=4.0, best_cost=9.0, i_a=0.0)),
            ],
            sigma_gb2=4.0,
        )
        new = placement_step(state, {1: 1.0, 2: 9.0}, params)
        assert new.sigma_gb2 == 4.0
        ns = new.node(1)
        assert ns.i_a == 1.0
        assert ns.sigma_p2 == 3.0

    def test_personal_best_updates_on_improvement(self):
        state = make_state([(1, dict(sigma_p2=7.0, sigma_b2=1.0, best_cost=2.0, i_a=0.0))])
        new = placement_step(state, {1: 5.0}, self.PARAMS)
        ns = new.nodes[0]
        assert ns.best_cost == 5.0
        assert ns.sigma_b2 == 7.0

    def test_no_update_without_improvement(self):
        state = make_state([(1, dict(sigma_p2=7.0, sigma_b2=1.0, best_cost=6.0, i_a=0.0))])
        new = placement_step(state, {1: 5.0}, self.PARAMS)
        assert new.nodes[0].best_cost == 6.0
        assert new.nodes[0].sigma_b2 == 1.0

    def test_global_best_follows_best_cost(self):
        state = make_state(
            [
                (1, dict(sigma_p2=3.0, sigma_b2=3.0, best_cost=-math.inf, i_a=0.0)),
                (2, dict(sigma_p2=8.0, sigma_b2=8.0, best_cost=-math.inf, i_a=0.0)),
            ]
        )
        new = placement_step(state, {1: 2.0, 2: 10.0}, self.PARAMS)
        assert new.sigma_gb2 == 8.0

    def test_fixed_point_is_stationary(self):
        state = make_state(
            [
                (1, dict(sigma_p2=5.0, sigma_b2=5.0, best_cost=9.0, i_a=0.0)),
                (2, dict(sigma_p2=5.0, sigma_b2=5.0, best_cost=3.0, i_a=0.0)),
            ],
            sigma_gb2=5.0,
        )
        new = placement_step(state, {1: 1.0, 2: 1.0}, self.PARAMS)
        for ns in new.nodes:
            assert ns.sigma_p2 == 5.0 and ns.i_a == 0.0
        assert new.sigma_gb2 == 5.0

    def test_misaligned_costs_rejected(self):
        state = make_state([(1, dict(sigma_p2=1.0, sigma_b2=1.0, best_cost=0.0, i_a=0.0))])
        with pytest.raises(ValueError):
            placement_step(state, {2: 1.0}, self.PARAMS)

    def test_history_appends_mean(self):
        state = make_state(
            [
                (1, dict(sigma_p2=1.0, sigma_b2=1.0, best_cost=0.0, i_a=0.0)),
                (2, dict(sigma_p2=1.0, sigma_b2=1.0, best_cost=0.0, i_a=0.0)),
            ]
        )
        new = placement_step(state, {1: 2.0, 2: 4.0}, self.PARAMS)
        assert new.cost_history == (3.0,)
        assert new.round == 1


@pytest.fixture(scope="module")
def sun_shade_run(deployment):
    scn = data_io.sun_shade_scenario(deployment)
    matrix = data_io.generate_synthetic(scn, deployment)
    clusters = form_clusters(deployment, 6.0)
    params = PlacementParams(phi1=0.5, phi2=0.5, rounds=300, threshold=5.0)
    record = []
    state = run_placement(deployment, matrix, clusters, params, seed=42, record=record)
    costs = cluster_costs(matrix, clusters)
    return deployment, matrix, clusters, state, costs, record


class TestRunPlacement:
    def test_single_round_history(self, deployment):
        scn = data_io.sun_shade_scenario(deployment, epochs=50)
        matrix = data_io.generate_synthetic(scn, deployment)
        clusters = form_clusters(deployment, 6.0)
        state = run_placement(deployment, matrix, clusters, PlacementParams(rounds=1))
        assert len(state.cost_history) == 1

    def test_identical_readings_symmetric_state(self, deployment):
        # every node shows the same series, so variances and bests coincide
        ids = deployment.ids()
        epochs = tuple(range(10))
        series = np.arange(10.0)
        values = np.tile(series, (len(ids), 1))
        matrix = data_io.ReadingMatrix(
            node_ids=tuple(ids),
            epochs=epochs,
            values=values,
            missing=np.zeros_like(values, dtype=bool),
        )
        clusters = form_clusters(deployment, 6.0)
        state = run_placement(deployment, matrix, clusters, PlacementParams(rounds=1))
        shared = float(np.var(series, ddof=1))
        assert state.sigma_gb2 == pytest.approx(shared, rel=1e-12)
        assert all(ns.sigma_b2 == state.nodes[0].sigma_b2 for ns in state.nodes)

    def test_best_cost_monotone_per_round(self, sun_shade_run):
        *_, record = sun_shade_run
        for prev, cur in zip(record, record[1:]):
            for a, b in zip(prev.nodes, cur.nodes):
                assert b.best_cost >= a.best_cost

    def test_global_best_dominates(self, sun_shade_run):
        *_, record = sun_shade_run
        for st in record:
            leader = max(ns.best_cost for ns in st.nodes)
            assert all(ns.best_cost <= leader for ns in st.nodes)

    def test_saturation_of_mean_cost(self, sun_shade_run):
        _, _, _, state, _, _ = sun_shade_run
        tail = np.asarray(state.cost_history[-30:])
        assert (tail.max() - tail.min()) / abs(tail.mean()) < 0.01

    def test_determinism_bitwise(self, deployment):
        scn = data_io.sun_shade_scenario(deployment, epochs=60)
        matrix = data_io.generate_synthetic(scn, deployment)
        clusters = form_clusters(deployment, 6.0)
        params = PlacementParams(rounds=40)
        a = run_placement(deployment, matrix, clusters, params, seed=1)
        b = run_placement(deployment, matrix, clusters, params, seed=2)
        assert a.cost_history == b.cost_history
        assert a == b

    def test_missing_readings_rejected(self, deployment):
        scn = data_io.sun_shade_scenario(deployment, epochs=50)
        matrix = data_io.generate_synthetic(scn, deployment)
        short = data_io.ReadingMatrix(
            node_ids=matrix.node_ids[:-1],
            epochs=matrix.epochs,
            values=matrix.values[:-1],
            missing=matrix.missing[:-1],
        )
        clusters = form_clusters(deployment, 6.0)
        with pytest.raises(ValueError):
            run_placement(deployment, short, clusters, PlacementParams(rounds=2))


class TestSelectNodes:
    def test_zero_threshold_selects_all(self, sun_shade_run):
        _, _, _, state, costs, _ = sun_shade_run
        assert select_nodes(state, costs, 0.0) == set(costs)

    def test_threshold_above_max_selects_none(self, sun_shade_run):
        _, _, _, state, costs, _ = sun_shade_run
        assert select_nodes(state, costs, 1e9) == set()

    def test_monotone_shrinkage(self, sun_shade_run):
        _, _, _, state, costs, _ = sun_shade_run
        prev = set(costs)
        for t in np.linspace(0.0, max(costs.values()) + 1.0, 25):
            cur = select_nodes(state, costs, float(t))
            assert cur <= prev
            prev = cur

    def test_selects_sun_group(self, sun_shade_run):
        dep, _, _, state, costs, _ = sun_shade_run
        sun, _ = data_io.sun_shade_groups(dep)
        assert select_nodes(state, costs, 5.0) == sun


class TestParams:
    def test_factors_must_not_both_vanish(self):
        with pytest.raises(ValueError):
            PlacementParams(phi1=0.0, phi2=0.0)

    def test_rounds_at_least_one(self):
        with pytest.raises(ValueError):
            PlacementParams(rounds=0)
