/**
 * TypeScript adapter over the mixedmotive engine's stdio bridge.
 *
 * The adapter holds no game logic: it spawns `python -m mixedmotive.cli
 * bridge`, marshals line-delimited JSON requests, and returns the engine's
 * numbers untouched. Floats cross the boundary as shortest-round-trip JSON,
 * so every value is bit-identical to what the engine computed.
 */

import { ChildProcess, spawn } from "node:child_process";
import { createInterface, Interface } from "node:readline";

export type RewardMode = "private" | "integrated" | "cooperative";

export interface StepRecord {
  t: number;
  actions: number[];
  pi: number[];
  modifiers: number[];
  rewards: number[];
  trust?: number[][];
  loyalty?: number[];
  terminated: boolean;
  truncated: boolean;
}

export interface ResetResult {
  observations: Record<string, number[]>;
}

export interface StepResult {
  observations: Record<string, number[]>;
  rewards: Record<string, number>;
  terminations: Record<string, boolean>;
  truncations: Record<string, boolean>;
  infos: Record<string, { pi: number; modifier: number }>;
  record: StepRecord;
}

export interface MakeOptions {
  mode?: RewardMode;
  seed?: number;
  /** Interpreter used to host the engine (default "python3"). */
  python?: string;
}

interface BridgeResponse {
  ok: boolean;
  error?: string;
  [key: string]: unknown;
}

/** Serializes requests to one bridge process and matches replies in order. */
class Bridge {
  private proc: ChildProcess;
  private lines: Interface;
  private queue: Array<{
    resolve: (value: BridgeResponse) => void;
    reject: (err: Error) => void;
  }> = [];
  private closed = false;

  constructor(python: string) {
    this.proc = spawn(python, ["-m", "mixedmotive.cli", "bridge"], {
      stdio: ["pipe", "pipe", "inherit"],
    });
    this.lines = createInterface({ input: this.proc.stdout! });
    this.lines.on("line", (line) => {
      const pending = this.queue.shift();
      if (pending) {
        pending.resolve(JSON.parse(line) as BridgeResponse);
      }
    });
    this.proc.on("exit", () => {
      this.closed = true;
      for (const pending of this.queue.splice(0)) {
        pending.reject(new Error("bridge process exited"));
      }
    });
  }

  request(message: Record<string, unknown>): Promise<BridgeResponse> {
    if (this.closed) {
      return Promise.reject(new Error("bridge process is closed"));
    }
    return new Promise((resolve, reject) => {
      this.queue.push({ resolve, reject });
      this.proc.stdin!.write(JSON.stringify(message) + "\n");
    });
  }

  shutdown(): void {
    this.closed = true;
    this.proc.stdin!.end();
    this.proc.kill();
  }
}

async function call(
  bridge: Bridge,
  message: Record<string, unknown>
): Promise<BridgeResponse> {
  const resp = await bridge.request(message);
  if (!resp.ok) {
    throw new Error(resp.error ?? "bridge request failed");
  }
  return resp;
}

/** One live engine environment behind an opaque handle. */
export class BoundEnv {
  readonly envId: string;
  readonly nAgents: number;
  readonly agents: string[];
  readonly horizon: number;
  readonly observationLength: number;

  private bridge: Bridge;
  private handle: number;
  private open = true;

  private constructor(
    bridge: Bridge,
    handle: number,
    envId: string,
    nAgents: number,
    agents: string[],
    horizon: number,
    observationLength: number
  ) {
    this.bridge = bridge;
    this.handle = handle;
    this.envId = envId;
    this.nAgents = nAgents;
    this.agents = agents;
    this.horizon = horizon;
    this.observationLength = observationLength;
  }

  static async create(envId: string, options: MakeOptions = {}): Promise<BoundEnv> {
    const bridge = new Bridge(options.python ?? "python3");
    try {
      const resp = await call(bridge, {
        op: "make",
        env_id: envId,
        mode: options.mode ?? "integrated",
        seed: options.seed ?? null,
      });
      return new BoundEnv(
        bridge,
        resp.handle as number,
        envId,
        resp.n_agents as number,
        resp.agents as string[],
        resp.horizon as number,
        resp.observation_length as number
      );
    } catch (err) {
      bridge.shutdown();
      throw err;
    }
  }

  private assertOpen(): void {
    if (!this.open) {
      throw new Error(`environment handle for ${this.envId} is closed`);
    }
  }

  async reset(seed?: number): Promise<ResetResult> {
    this.assertOpen();
    const resp = await call(this.bridge, {
      op: "reset",
      handle: this.handle,
      seed: seed ?? null,
    });
    return { observations: resp.observations as Record<string, number[]> };
  }

  async step(actions: Record<string, number>): Promise<StepResult> {
    this.assertOpen();
    const resp = await call(this.bridge, {
      op: "step",
      handle: this.handle,
      actions,
    });
    return {
      observations: resp.observations as Record<string, number[]>,
      rewards: resp.rewards as Record<string, number>,
      terminations: resp.terminations as Record<string, boolean>,
      truncations: resp.truncations as Record<string, boolean>,
      infos: resp.infos as Record<string, { pi: number; modifier: number }>,
      record: resp.record as StepRecord,
    };
  }

  async close(): Promise<void> {
    if (!this.open) {
      return;
    }
    this.open = false;
    try {
      await call(this.bridge, { op: "close", handle: this.handle });
    } finally {
      this.bridge.shutdown();
    }
  }
}

/** Instantiate a registered environment behind a fresh bridge process. */
export function make(envId: string, options: MakeOptions = {}): Promise<BoundEnv> {
  return BoundEnv.create(envId, options);
}

/** Engine version string; must match this package's major.minor. */
export async function engineVersion(python = "python3"): Promise<string> {
  const bridge = new Bridge(python);
  try {
    const resp = await call(bridge, { op: "version" });
    return resp.version as string;
  } finally {
    bridge.shutdown();
  }
}
