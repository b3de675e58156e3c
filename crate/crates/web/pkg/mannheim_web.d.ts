/* tslint:disable */
/* eslint-disable */

export class Demo {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    summary: string;
    svg: string;
}

export function ellipse_conjugate(p: number, q: number, a: number, epsilon: number): Demo;

export function helix_partner(r: number, b: number, c: number, view: string): Demo;

export function synthesize(kappa: string, tau: string, length: number, view: string): Demo;

export function version(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly __wbg_get_demo_summary: (a: number) => [number, number];
    readonly __wbg_get_demo_svg: (a: number) => [number, number];
    readonly __wbg_set_demo_summary: (a: number, b: number, c: number) => void;
    readonly __wbg_set_demo_svg: (a: number, b: number, c: number) => void;
    readonly ellipse_conjugate: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly helix_partner: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly synthesize: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly version: () => [number, number];
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
