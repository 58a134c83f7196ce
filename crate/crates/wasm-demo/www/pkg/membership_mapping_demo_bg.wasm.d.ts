/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_curvefit_free: (a: number, b: number) => void;
export const conditional_band: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
export const curvefit_beta_trace: (a: number) => [number, number];
export const curvefit_converged: (a: number) => number;
export const curvefit_grid_x: (a: number) => [number, number];
export const curvefit_grid_y: (a: number) => [number, number];
export const curvefit_inducing: (a: number) => [number, number];
export const curvefit_width: (a: number) => number;
export const fit_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number) => [number, number, number];
export const membership_profile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
