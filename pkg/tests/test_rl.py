import numpy as np
import pytest

from advbench.core.cache import read_cache
from advbench.core.errors import CheckpointError, ConfigurationError, DivergenceError, ShapeError, UsageError
from advbench.env import DrivingEnv, ScenarioConfig
from advbench.policies import null_policy
from advbench.rewards import ObjectiveKind, ObjectiveSpec
from advbench.rl.checkpoint import decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint
from advbench.rl.ddpg import DdpgAgent, DdpgConfig, critic_targets, ddpg_update, exploratory_action, soft_update
from advbench.rl.losses import ConstantLoss, LinearLoss, SquaredError
from advbench.rl.mlp import BoundedHead, Mlp, gradients
from advbench.rl.noise import OuNoise, ou_sample
from advbench.rl.optim import MomentumSgd, clip_by_global_norm
from advbench.rl.replay import Batch, ReplayBuffer, Transition
from advbench.rl.trainer import Role, seed_streams, train, write_divergence_dump
from advbench.metrics.records import TrainingRecord


def _loss_value(net, loss, batch):
    return loss.value(net.forward(batch))


class TestMlp:
    """Network forward and backward passes."""

    def test_zero_network(self):
        net = Mlp([4, 6, 2])
        net.set_flat_parameters(np.zeros(net.parameter_count()))
        assert np.array_equal(net.forward(np.ones(4)), np.zeros(2))

    def test_single_layer(self):
        net = Mlp([2, 3])
        net.weights[0][...] = [[1.0, 2.0], [0.0, -1.0], [3.0, 0.5]]
        net.biases[0][...] = [0.5, 1.0, -2.0]
        assert net.forward([2.0, 4.0]).tolist() == [10.5, -3.0, 6.0]

    def test_batch_forward(self):
        net = Mlp([3, 4, 2], rng=np.random.default_rng(0))
        batch = np.random.default_rng(1).normal(size=(5, 3))
        rows = np.array([net.forward(row) for row in batch])
        assert np.allclose(net.forward(batch), rows)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            Mlp([3, 2]).forward(np.ones(4))
        with pytest.raises(ShapeError):
            Mlp([3])
        with pytest.raises(ShapeError):
            Mlp([3, 2], head=BoundedHead((0.0,), (1.0,)))

    @pytest.mark.parametrize("head", [None, BoundedHead((0.0, -1.0), (1.0, 1.0))])
    def test_finite_differences(self, head):
        rng = np.random.default_rng(5)
        net = Mlp([3, 7, 5, 2], head=head, rng=rng, final_scale=0.5)
        batch = rng.normal(size=(4, 3))
        loss = SquaredError(rng.normal(size=(4, 2)))
        analytic = np.concatenate([g.ravel() for g in gradients(net, loss, batch)])

        params = net.flat_parameters()
        numeric = np.zeros_like(params)
        eps = 1e-6
        for i in range(params.size):
            shifted = params.copy()
            shifted[i] += eps
            net.set_flat_parameters(shifted)
            upper = _loss_value(net, loss, batch)
            shifted[i] -= 2 * eps
            net.set_flat_parameters(shifted)
            lower = _loss_value(net, loss, batch)
            numeric[i] = (upper - lower) / (2 * eps)
        assert np.allclose(analytic, numeric, rtol=1e-4, atol=1e-6)

    def test_input_gradient(self):
        rng = np.random.default_rng(8)
        net = Mlp([3, 6, 1], rng=rng, final_scale=0.5)
        x = rng.normal(size=(1, 3))
        weights = np.array([[1.0]])
        _, cache = net.forward_with_cache(x)
        _, grad_x = net.backward(cache, LinearLoss(weights).grad(net.forward(x)))
        eps = 1e-6
        for i in range(3):
            up, down = x.copy(), x.copy()
            up[0, i] += eps
            down[0, i] -= eps
            numeric = (net.forward(up)[0, 0] - net.forward(down)[0, 0]) / (2 * eps)
            assert grad_x[0, i] == pytest.approx(numeric, rel=1e-4, abs=1e-7)

    def test_constant_loss(self):
        net = Mlp([3, 4, 2], rng=np.random.default_rng(2))
        grads = gradients(net, ConstantLoss(3.0), np.ones((2, 3)))
        assert all(not np.any(g) for g in grads)

    def test_bounded_head_range(self):
        net = Mlp([2, 3], head=BoundedHead((0.0, 0.0, -1.0), (1.0, 1.0, 1.0)), final_scale=100.0)
        out = net.forward(np.random.default_rng(0).normal(size=(50, 2)) * 10)
        assert np.all(out[:, :2] >= 0.0) and np.all(out[:, :2] <= 1.0)
        assert np.all(out[:, 2] >= -1.0) and np.all(out[:, 2] <= 1.0)


class TestOptim:
    """Gradient clipping and momentum SGD."""

    def test_clip(self):
        grads = [np.array([3.0, 0.0]), np.array([4.0])]
        assert clip_by_global_norm(grads, 1.0) == 5.0
        assert np.allclose(grads[0], [0.6, 0.0]) and np.allclose(grads[1], [0.8])

    def test_no_clip(self):
        grads = [np.array([0.3])]
        clip_by_global_norm(grads, None)
        assert grads[0][0] == 0.3

    def test_momentum(self):
        param = np.array([1.0])
        sgd = MomentumSgd([param], lr=0.1, momentum=0.5)
        sgd.step([np.array([1.0])])
        sgd.step([np.array([1.0])])
        assert param[0] == pytest.approx(1.0 - 0.1 - 0.15)


class TestOuNoise:
    """Ornstein-Uhlenbeck process."""

    def test_fixed_point(self):
        noise = OuNoise(3, mu=0.4, sigma=0.0, seed=1)
        for _ in range(10):
            assert np.array_equal(noise.sample(), np.full(3, 0.4))

    def test_decay(self):
        noise = OuNoise(1, theta=0.2, mu=0.0, sigma=0.0, dt=0.5)
        noise.state = np.array([1.0])
        for k in range(1, 6):
            assert noise.sample()[0] == pytest.approx(0.9**k)

    def test_stationary_variance(self):
        noise = OuNoise(4000, theta=0.15, sigma=0.2, seed=3)
        for _ in range(200):
            noise.sample()
        variances = []
        for _ in range(20):
            variances.append(np.var(noise.sample()))
        assert np.mean(variances) == pytest.approx(noise.stationary_variance(), rel=0.1)

    def test_seeded(self):
        assert np.array_equal(OuNoise(3, seed=7).sample(), OuNoise(3, seed=7).sample())
        assert np.array_equal(ou_sample(OuNoise(3, seed=7)), OuNoise(3, seed=7).sample())

    def test_anneal(self):
        noise = OuNoise(1, sigma=0.2)
        noise.anneal(0.0, floor=0.1, span=0.5)
        assert noise.sigma == pytest.approx(0.2)
        noise.anneal(0.25, floor=0.1, span=0.5)
        assert noise.sigma == pytest.approx(0.2 * 0.55)
        noise.anneal(0.9, floor=0.1, span=0.5)
        assert noise.sigma == pytest.approx(0.02)


def _transition(value: float, obs_dim: int = 2, done: bool = False) -> Transition:
    return Transition(np.full(obs_dim, value), np.full(3, 0.5), value, np.full(obs_dim, value + 1), done)


class TestReplayBuffer:
    """FIFO experience replay."""

    def test_fifo_eviction(self):
        buffer = ReplayBuffer(3, 2, 3, seed=0)
        for k in range(5):
            buffer.add(_transition(float(k)))
        assert len(buffer) == 3
        assert [t.r for t in buffer.transitions()] == [2.0, 3.0, 4.0]

    def test_sample_without_replacement(self):
        buffer = ReplayBuffer(10, 2, 3, seed=0)
        for k in range(10):
            buffer.add(_transition(float(k)))
        batch = buffer.sample(10)
        assert sorted(batch.r.tolist()) == [float(k) for k in range(10)]

    def test_insufficient(self):
        buffer = ReplayBuffer(10, 2, 3)
        buffer.add(_transition(1.0))
        with pytest.raises(UsageError):
            buffer.sample(2)

    def test_shape(self):
        with pytest.raises(ShapeError):
            ReplayBuffer(10, 4, 3).add(_transition(1.0))

    def test_done_flag(self):
        buffer = ReplayBuffer(2, 2, 3)
        buffer.add(_transition(1.0, done=True))
        assert buffer.transitions()[0].done


def _filled(agent: DdpgAgent, count: int, seed: int = 0) -> ReplayBuffer:
    rng = np.random.default_rng(seed)
    buffer = ReplayBuffer(count, agent.obs_dim, agent.action_dim, seed=seed)
    for _ in range(count):
        s = rng.normal(size=agent.obs_dim)
        a = rng.uniform(agent.action_low, agent.action_high)
        buffer.add(Transition(s, a, float(rng.normal()), rng.normal(size=agent.obs_dim), False))
    return buffer


class TestDdpg:
    """Update step."""

    def test_skipped_during_warmup(self):
        config = DdpgConfig(batch_size=16, hidden_sizes=[8])
        agent = DdpgAgent(4, config)
        assert ddpg_update(agent, _filled(agent, 8), config).skipped

    def test_tau_one_copies_online(self):
        config = DdpgConfig(tau=1.0, batch_size=8, hidden_sizes=[8], buffer_capacity=32)
        agent = DdpgAgent(4, config)
        ddpg_update(agent, _filled(agent, 32), config)
        assert np.array_equal(agent.target_actor.flat_parameters(), agent.actor.flat_parameters())
        assert np.array_equal(agent.target_critic.flat_parameters(), agent.critic.flat_parameters())

    def test_soft_update(self):
        target, source = Mlp([2, 2]), Mlp([2, 2])
        target.set_flat_parameters(np.zeros(6))
        source.set_flat_parameters(np.ones(6))
        soft_update(target, source, 0.25)
        assert np.allclose(target.flat_parameters(), 0.25)

    def test_soft_update_contracts_toward_frozen_source(self):
        rng = np.random.default_rng(12)
        for tau in (0.005, 0.1, 0.5, 1.0):
            target = Mlp([3, 5, 2], rng=rng, final_scale=1.0)
            source = Mlp([3, 5, 2], rng=rng, final_scale=1.0)
            frozen = source.flat_parameters().copy()
            gaps = [np.linalg.norm(target.flat_parameters() - frozen)]
            for _ in range(20):
                soft_update(target, source, tau)
                gaps.append(np.linalg.norm(target.flat_parameters() - frozen))
            assert np.array_equal(source.flat_parameters(), frozen)
            assert all(later <= earlier for earlier, later in zip(gaps, gaps[1:]))
            assert gaps[-1] == pytest.approx(gaps[0] * (1.0 - tau) ** 20, abs=1e-12)

    def test_gamma_zero_targets_reward(self):
        config = DdpgConfig(gamma=0.0, hidden_sizes=[8])
        assert config.reward_scale == 1.0 and config.max_grad_norm is None
        agent = DdpgAgent(2, config)
        rng = np.random.default_rng(4)
        batch = Batch(
            rng.normal(size=(5, 2)),
            rng.uniform(size=(5, 3)),
            np.array([10.0, -5.0, 0.25, 3.0, -200.0]),
            rng.normal(size=(5, 2)),
            np.zeros(5),
        )
        assert np.array_equal(critic_targets(agent, batch, config), batch.r)

    def test_reward_scale_opt_in(self):
        config = DdpgConfig(gamma=0.0, reward_scale=0.01, hidden_sizes=[8])
        agent = DdpgAgent(2, config)
        batch = Batch(np.zeros((2, 2)), np.zeros((2, 3)), np.array([10.0, -5.0]), np.ones((2, 2)), np.zeros(2))
        assert critic_targets(agent, batch, config) == pytest.approx([0.1, -0.05])

    def test_done_masks_bootstrap(self):
        config = DdpgConfig(gamma=0.9, hidden_sizes=[8])
        agent = DdpgAgent(2, config)
        batch = Batch(np.zeros((2, 2)), np.zeros((2, 3)), np.array([1.0, 2.0]), np.ones((2, 2)), np.ones(2))
        assert np.array_equal(critic_targets(agent, batch, config), [1.0, 2.0])

    def test_exploration_clamped(self):
        agent = DdpgAgent(4, DdpgConfig(hidden_sizes=[8]))
        action, raw = exploratory_action(agent, np.zeros(4), np.array([5.0, -5.0, 5.0]))
        assert action.tolist() == [1.0, 0.0, 1.0]
        assert np.all((raw >= agent.action_low) & (raw <= agent.action_high))

    def test_same_seed_same_networks(self):
        config = DdpgConfig(hidden_sizes=[8])
        first = DdpgAgent(4, config, rng=np.random.default_rng(3))
        second = DdpgAgent(4, config, rng=np.random.default_rng(3))
        assert np.array_equal(first.actor.flat_parameters(), second.actor.flat_parameters())

    def test_divergence(self):
        config = DdpgConfig(batch_size=8, hidden_sizes=[8])
        agent = DdpgAgent(4, config)
        agent.critic.weights[0][0, 0] = np.nan
        with pytest.raises(DivergenceError):
            ddpg_update(agent, _filled(agent, 16), config)

    def test_quadratic_bandit(self):
        config = DdpgConfig(
            gamma=0.0,
            actor_lr=3e-4,
            critic_lr=3e-3,
            batch_size=64,
            buffer_capacity=1024,
            hidden_sizes=[64, 64],
        )
        low, high = np.array([-1.0]), np.array([1.0])
        agent = DdpgAgent(1, config, low, high, rng=np.random.default_rng(0))
        rng = np.random.default_rng(1)
        buffer = ReplayBuffer(1024, 1, 1, seed=2)
        state = np.ones(1)
        for a in rng.uniform(-1.0, 1.0, size=1024):
            buffer.add(Transition(state, np.array([a]), -((a - 0.5) ** 2), state, True))

        for _ in range(5000):
            ddpg_update(agent, buffer, config)
        assert agent.act(state)[0] == pytest.approx(0.5, abs=0.05)

    def test_invalid_config(self):
        with pytest.raises(ConfigurationError):
            DdpgConfig(gamma=1.0).validate()
        with pytest.raises(ConfigurationError):
            DdpgConfig(tau=0.0).validate()
        with pytest.raises(ConfigurationError):
            DdpgConfig(batch_size=64, buffer_capacity=10).validate()


@pytest.fixture
def tiny_env(ring):
    return DrivingEnv(
        ring,
        ObjectiveSpec(kind=ObjectiveKind.direct_collision),
        subject_policy=null_policy(),
        scenario=ScenarioConfig(step_limit=15),
    )


TINY = dict(
    episodes_max=3, warmup_steps=10, batch_size=8, buffer_capacity=200, hidden_sizes=[8], seed=5
)


class TestTrainer:
    """Training loop."""

    def test_seed_streams(self):
        a, b = seed_streams(1), seed_streams(1)
        assert a[1:3] == b[1:3]
        assert a[0].random() == b[0].random()
        assert seed_streams(2)[1] != a[1]

    def test_repeatable(self, tiny_env):
        objective = tiny_env.objective
        _, first = train(tiny_env, Role.adversary, objective, DdpgConfig(**TINY))
        agent, second = train(tiny_env, Role.adversary, objective, DdpgConfig(**TINY))
        assert first.to_json() == second.to_json()
        assert len(second) == 3
        assert all(steps <= 15 for steps in second.steps)
        assert agent.actor.input_size == tiny_env.observation_size

    def test_wrong_role(self, tiny_env):
        with pytest.raises(ConfigurationError):
            train(tiny_env, Role.subject, tiny_env.objective, DdpgConfig(**TINY))

    def test_wrong_objective(self, tiny_env):
        other = ObjectiveSpec(kind=ObjectiveKind.induced_collision)
        with pytest.raises(ConfigurationError):
            train(tiny_env, Role.adversary, other, DdpgConfig(**TINY))

    def test_divergence_dump(self, tmp_path):
        agent = DdpgAgent(4, DdpgConfig(hidden_sizes=[8]))
        record = TrainingRecord(returns=[1.0], steps=[3], successes=[False], seed=9)
        path = write_divergence_dump(tmp_path, agent, record, episode=4)
        assert path.name == "divergence_seed9_ep4.pkl.lzma"
        dump = read_cache(path)
        assert dump["episode"] == 4
        assert np.array_equal(dump["actor"], agent.actor.flat_parameters())


class TestCheckpoint:
    """Binary network files."""

    def test_exact_parameters(self, tmp_path):
        net = Mlp([4, 5, 3], head=BoundedHead((0.0, 0.0, -1.0), (1.0, 1.0, 1.0)), rng=np.random.default_rng(2))
        path = tmp_path / "actor.ckpt"
        save_checkpoint(net, path)
        loaded = load_checkpoint(path, net.head)
        assert loaded.layer_sizes == [4, 5, 3]
        assert np.array_equal(loaded.flat_parameters(), net.flat_parameters())
        x = np.linspace(-1, 1, 4)
        assert np.array_equal(loaded.forward(x), net.forward(x))

    def test_bad_magic(self):
        with pytest.raises(CheckpointError):
            decode_checkpoint(b"XXXX" + bytes(20))

    def test_truncated(self):
        data = encode_checkpoint(Mlp([2, 2]))
        with pytest.raises(CheckpointError):
            decode_checkpoint(data[:-8])
        with pytest.raises(CheckpointError):
            decode_checkpoint(data[:-3])

    def test_missing(self, tmp_path):
        with pytest.raises(CheckpointError):
            load_checkpoint(tmp_path / "none.ckpt")
