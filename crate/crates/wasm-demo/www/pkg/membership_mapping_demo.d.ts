/* tslint:disable */
/* eslint-disable */

export class CurveFit {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly beta_trace: Float64Array;
    readonly converged: boolean;
    readonly grid_x: Float64Array;
    readonly grid_y: Float64Array;
    readonly inducing: Float64Array;
    /**
     * Kernel width actually used.
     */
    readonly width: number;
}

/**
 * Conditional mean and spread of the mapping output at each grid point,
 * given values `u` at inducing points `a` (1-D). Returns `2 * grid` values:
 * the means, then the square roots of the effective scales.
 */
export function conditional_band(a: Float64Array, u: Float64Array, width: number, nu: number, lo: number, hi: number, grid: number): Float64Array;

/**
 * Fits a 1-D model to `(xs, ys)` and evaluates it on `grid` points over
 * `[lo, hi]`. A `width` of 0 selects the width heuristic.
 */
export function fit_curve(xs: Float64Array, ys: Float64Array, m: number, nu: number, sigma_x2: number, width: number, lo: number, hi: number, grid: number): CurveFit;

/**
 * Membership ζ(y) of a scalar Student-t membership with mean 0 and the given
 * variance, followed by its normalized density, each on `grid` points over
 * `[-span, span]`: the result holds `2 * grid` values.
 */
export function membership_profile(nu: number, variance: number, span: number, grid: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_curvefit_free: (a: number, b: number) => void;
    readonly conditional_band: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly curvefit_beta_trace: (a: number) => [number, number];
    readonly curvefit_converged: (a: number) => number;
    readonly curvefit_grid_x: (a: number) => [number, number];
    readonly curvefit_grid_y: (a: number) => [number, number];
    readonly curvefit_inducing: (a: number) => [number, number];
    readonly curvefit_width: (a: number) => number;
    readonly fit_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number) => [number, number, number];
    readonly membership_profile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
