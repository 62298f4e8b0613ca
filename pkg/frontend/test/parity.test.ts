import assert from "node:assert/strict";
import test from "node:test";
import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { BoundEnv, StepRecord, engineVersion, make } from "../src/index";

const PKG_VERSION = require("../../package.json").version as string;

function nativeCliTrace(envId: string, policy: string, seed: number): StepRecord[] {
  const out = mkdtempSync(join(tmpdir(), "mixedmotive-"));
  const proc = spawnSync(
    "python3",
    ["-m", "mixedmotive.cli", "run", "--env", envId, "--policy", policy,
     "--seed", String(seed), "--out", out],
    { encoding: "utf8" }
  );
  assert.equal(proc.status, 0, proc.stderr);
  const lines = readFileSync(join(out, `${envId}_seed${seed}.jsonl`), "utf8")
    .trim()
    .split("\n");
  return lines
    .map((line) => JSON.parse(line))
    .filter((obj) => !obj.summary) as StepRecord[];
}

test("version string matches the native engine", async () => {
  assert.equal(await engineVersion(), PKG_VERSION);
});

test("make exposes the registered agent count", async () => {
  const env = await make("TrustDilemma-v0", { seed: 99 });
  assert.equal(env.nAgents, 2);
  assert.deepEqual(env.agents, ["agent_0", "agent_1"]);
  assert.equal(env.horizon, 100);
  await env.close();
});

test("invalid environment id surfaces as an error", async () => {
  await assert.rejects(make("NoSuchEnv-v9"), /unknown environment/);
});

test("operations on a closed handle fail cleanly", async () => {
  const env = await make("TrustDilemma-v0", { seed: 1 });
  await env.close();
  await assert.rejects(env.step({ agent_0: 50, agent_1: 50 }), /closed/);
});

test("parallel step returns the five per-agent collections", async () => {
  const env = await make("TrustDilemma-v0", { seed: 42 });
  await env.reset(42);
  const result = await env.step({ agent_0: 60.0, agent_1: 55.0 });
  for (const part of [result.observations, result.rewards,
                      result.terminations, result.truncations, result.infos]) {
    assert.deepEqual(Object.keys(part).sort(), ["agent_0", "agent_1"]);
  }
  assert.equal(result.observations.agent_0.length, env.observationLength);
  await env.close();
});

test("bound trajectory equals the native CLI trace bit-for-bit", async () => {
  const native = nativeCliTrace("TrustDilemma-v0", "constant:50", 99);
  assert.equal(native.length, 100);

  const env = await make("TrustDilemma-v0", { seed: 99 });
  await env.reset(99);
  const bound: StepRecord[] = [];
  for (let t = 0; t < 100; t++) {
    const result = await env.step({ agent_0: 50.0, agent_1: 50.0 });
    bound.push(result.record);
    assert.equal(result.rewards.agent_0, result.record.rewards[0]);
  }
  await env.close();

  // Number equality after JSON round-trip is bit equality for doubles.
  assert.deepEqual(bound, native);
});

test("two handles with the same seed give identical independent trajectories", async () => {
  const a = await make("SLCD-v0", { seed: 7 });
  const b = await make("SLCD-v0", { seed: 7 });
  await a.reset(7);
  await b.reset(7);
  for (let t = 0; t < 40; t++) {
    const ra = await a.step({ agent_0: 33.0, agent_1: 66.0 });
    const rb = await b.step({ agent_0: 33.0, agent_1: 66.0 });
    assert.deepEqual(ra.record, rb.record);
  }
  await a.close();
  await b.close();
});

test("out-of-range actions clip exactly as the native engine clips", async () => {
  const env = await make("TrustDilemma-v0", { seed: 0 });
  await env.reset(0);
  const result = await env.step({ agent_0: -25.0, agent_1: 500.0 });
  assert.deepEqual(result.record.actions, [0.0, 100.0]);
  await env.close();
});
