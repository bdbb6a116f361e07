/* tslint:disable */
/* eslint-disable */

export function beamPattern(elements: number, steer_deg: number, f_ghz: number, true_time_delay: boolean): Float64Array;

/**
 * Crossover length in km, `NaN` when RFoF stays cheaper over the range.
 */
export function crossoverKm(f_rf_ghz: number, num_raps: number, p_tx_w: number, max_km: number): number;

export function dispersionCurve(f_rf_ghz: number, max_km: number, points: number): Float64Array;

export function powerCurves(f_rf_ghz: number, num_raps: number, p_tx_w: number, max_km: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly beamPattern: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly crossoverKm: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly dispersionCurve: (a: number, b: number, c: number) => [number, number, number, number];
    readonly powerCurves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
