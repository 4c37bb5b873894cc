/* tslint:disable */
/* eslint-disable */

/**
 * Basis functions and their fractional images on `[0, 1]`.
 */
export function basisImages(alpha: number, beta: number, degree: number, grid: number): string;

/**
 * Max error and objective gap for `n = 0..=max_n`.
 */
export function convergenceTable(name: string, alpha: number, epsilon: number, max_n: number): string;

/**
 * Solves a built-in example; JSON with `x`, `y_n`, `y_exact`, `error`.
 */
export function solveExample(name: string, alpha: number, epsilon: number, n: number, grid: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly basisImages: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly convergenceTable: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly solveExample: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
