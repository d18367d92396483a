/**
 * Process-level bridge to the core CLI.
 *
 * The core is reached through its public surfaces only: command-line
 * invocations, the FSTN tensor format, and the JSON config schema.  A
 * non-zero exit becomes a CoreError carrying the core's own error text.
 */

import { spawnSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

/** Raised when the core exits non-zero; `message` is the core's stderr text. */
export class CoreError extends Error {
    public readonly exitCode: number;

    public constructor(message: string, exitCode: number) {
        super(message);
        this.name = "CoreError";
        this.exitCode = exitCode;
    }
}

/**
 * Command used to launch the core.  Override with FOURISCALE_CLI (a full
 * command line, e.g. "fouriscale" or "/usr/bin/python3 -m fouriscale.cli").
 */
export function coreCommand(): string[] {
    const override = process.env.FOURISCALE_CLI;
    if (override !== undefined && override.trim() !== "") {
        return override.trim().split(/\s+/);
    }
    return ["python3", "-m", "fouriscale.cli"];
}

/** Run one core subcommand and return its stdout. */
export function runCore(args: string[]): string {
    const [command, ...prefix] = coreCommand();
    const result = spawnSync(command, [...prefix, ...args], {
        encoding: "utf8",
        maxBuffer: 1 << 28,
    });
    if (result.error) {
        throw result.error;
    }
    if (result.status !== 0) {
        const text = (result.stderr ?? "").trim() || `core exited with status ${result.status}`;
        throw new CoreError(text, result.status ?? -1);
    }
    return result.stdout;
}

/** Create a scratch directory, hand it to `body`, and always clean it up. */
export function withScratchDir<T>(body: (dir: string) => T): T {
    const dir = mkdtempSync(join(tmpdir(), "fouriscale-"));
    try {
        return body(dir);
    } finally {
        rmSync(dir, { recursive: true, force: true });
    }
}
