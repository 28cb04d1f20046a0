/* tslint:disable */
/* eslint-disable */

/**
 * `[Re E_α(z), Im E_α(z)]`. `mode` is one of auto, series, bochner, bessel.
 */
export function kernel(alpha: number, re: number, im: number, mode: string): Float64Array;

/**
 * `S_{α,β}` (or with `dual`, its dual) of `x^n e^{-x²}` at each `x`,
 * flattened as `x, Re, Im` triples.
 */
export function sonine(alpha: number, beta: number, n: number, xs: Float64Array, dual: boolean): Float64Array;

/**
 * Dunkl transform of `x^n e^{-x²}` at `count` evenly spaced `λ` in
 * `[-lambda_max, lambda_max]`, flattened as `λ, Re F, Im F` triples.
 */
export function transform_moment(alpha: number, n: number, lambda_max: number, count: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly kernel: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly sonine: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly transform_moment: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
