/* tslint:disable */
/* eslint-disable */

/**
 * Membership of the gaussian band on a `cols × rows` raster covering
 * `[-half, half] × [t_lo, t_hi]`, top row first.
 */
export function band_raster(cols: number, rows: number, half: number, t_lo: number, t_hi: number): Uint8Array;

/**
 * Radius of the gaussian band's slice on the leaf `t`; `-1` when the slice is empty.
 */
export function band_slice_radius(t: number): number;

/**
 * Retarded response to a unit impulse at `(n0, j0)` on levels `0..=steps`
 * and sites `-j_max..=j_max` with `Δx = 1`, `Δt = λ`; row-major from level 0.
 */
export function retarded_impulse(lambda: number, steps: number, j_max: number, n0: number, j0: number): Float64Array;

/**
 * Heights of the lower envelope of the events `[t0, x0, t1, x1, …]` at `xs`.
 */
export function sigma_minus(events: Float64Array, xs: Float64Array): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly band_raster: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly band_slice_radius: (a: number) => number;
    readonly retarded_impulse: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly sigma_minus: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
