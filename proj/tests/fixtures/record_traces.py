#!/usr/bin/env python3
# Copyright 2026 The svqc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Records injected-state reference traces from gymnasium.

Each output line is one step: the raw physics state that was injected (or
carried over), the action, and what the reference environment returned.

    python record_traces.py --env CartPole-v1 --steps 1000 --seed 7 > cartpole-v1.jsonl
"""

import argparse
import json
import math

import gymnasium as gym
import numpy as np


def random_state(env_id, rng):
    if env_id.startswith("CartPole"):
        return [rng.uniform(-2.3, 2.3), rng.uniform(-2, 2), rng.uniform(-0.2, 0.2), rng.uniform(-2.5, 2.5)]
    return [rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi),
            rng.uniform(-4 * math.pi, 4 * math.pi), rng.uniform(-9 * math.pi, 9 * math.pi)]


def emit(env, action, start):
    before = [float(v) for v in env.state]
    obs, reward, terminated, _, _ = env.step(action)
    print(json.dumps({
        "reset": start,
        "state": before,
        "action": action,
        "obs": [float(v) for v in obs],
        "next_state": [float(v) for v in env.state],
        "reward": float(reward),
        "done": bool(terminated),
    }))
    return bool(terminated)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--env", required=True)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--segment", type=int, default=40)
    ap.add_argument("--push", type=int, default=None,
                    help="start from the zero state and repeat this action")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    env = gym.make(args.env).unwrapped
    n_actions = int(env.action_space.n)
    print(json.dumps({"env": args.env, "gymnasium": gym.__version__, "steps": args.steps}))

    if args.push is not None:
        env.reset(seed=args.seed)
        env.state = np.zeros(4)
        for i in range(args.steps):
            if emit(env, args.push, i == 0):
                break
        return

    left = 0
    for _ in range(args.steps):
        if left == 0:
            env.reset(seed=int(rng.integers(1 << 31)))
            env.state = np.array(random_state(args.env, rng), dtype=np.float64)
            left, start = args.segment, True
        terminated = emit(env, int(rng.integers(n_actions)), start)
        start = False
        left = 0 if terminated else left - 1


if __name__ == "__main__":
    main()
