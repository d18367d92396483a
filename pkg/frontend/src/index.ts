/**
 * Bindings over the fouriscale core.
 *
 * These functions hold zero numerical logic: they marshal arguments into
 * the core's file formats, invoke its CLI, and unmarshal the results, so
 * every returned value is bit-exact against the core's own output.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { runCore, withScratchDir } from "./core.js";
import { BoundArray, decodeFstn, encodeFstn } from "./fstn.js";

export { CoreError, coreCommand, runCore } from "./core.js";
export { BoundArray, decodeFstn, encodeFstn, DTYPE_F32, DTYPE_F64 } from "./fstn.js";

/** Mask parameters as accepted by the core's `mask` subcommand. */
export interface FilterShape {
    sigma: number;
    scale: [number, number];
    ramp: [number, number];
}

/** One resolved schedule timestep, as emitted by `schedule --json`. */
export interface ScheduleRecord {
    t: number;
    dilation: number;
    r: number;
    filter_active: boolean;
    filter: FilterShape;
    guidance: FilterShape;
}

/** Run configuration mirroring the core's JSON config schema. */
export type RunConfig = Record<string, unknown>;

/**
 * Build a centralized low-pass mask of the given extents.
 *
 * Result values are the core's float64 mask, bit-exact.
 */
export function boundBuildMask(
    extents: [number, number],
    sigma: number,
    sH: number,
    sW: number,
    rH: number,
    rW: number,
): BoundArray {
    return withScratchDir((dir) => {
        const out = join(dir, "mask.fstn");
        runCore([
            "mask",
            "--extent", String(extents[0]), String(extents[1]),
            "--scale", String(sH), String(sW),
            "--ramp", String(rH), String(rW),
            "--sigma", String(sigma),
            "--out", out,
        ]);
        return decodeFstn(readFileSync(out));
    });
}

/**
 * Apply the pad/filter/crop/dilated-conv pipeline to a feature map.
 *
 * `feature` is H x W or C x H x W, `kernel` is a rank-2 tap grid, `config`
 * follows the JSON schema, and `stepIndex` selects the schedule timestep.
 */
export function boundFouriscaleConv(
    feature: BoundArray,
    kernel: BoundArray,
    config: RunConfig,
    stepIndex: number,
): BoundArray {
    return withScratchDir((dir) => {
        const featurePath = join(dir, "feature.fstn");
        const kernelPath = join(dir, "kernel.fstn");
        const configPath = join(dir, "config.json");
        const outPath = join(dir, "out.fstn");
        writeFileSync(featurePath, encodeFstn(feature));
        writeFileSync(kernelPath, encodeFstn(kernel));
        writeFileSync(configPath, JSON.stringify(config));
        runCore([
            "apply",
            "--in", featurePath,
            "--kernel", kernelPath,
            "--config", configPath,
            "--step", String(stepIndex),
            "--out", outPath,
        ]);
        return decodeFstn(readFileSync(outPath));
    });
}

/** Resolve the full anneal schedule for a configuration. */
export function boundSchedule(config: RunConfig): ScheduleRecord[] {
    return withScratchDir((dir) => {
        const configPath = join(dir, "config.json");
        writeFileSync(configPath, JSON.stringify(config));
        const stdout = runCore(["schedule", "--config", configPath, "--json"]);
        return JSON.parse(stdout) as ScheduleRecord[];
    });
}
