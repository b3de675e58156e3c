/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const __wbg_get_demo_summary: (a: number) => [number, number];
export const __wbg_get_demo_svg: (a: number) => [number, number];
export const __wbg_set_demo_summary: (a: number, b: number, c: number) => void;
export const __wbg_set_demo_svg: (a: number, b: number, c: number) => void;
export const ellipse_conjugate: (a: number, b: number, c: number, d: number) => [number, number, number];
export const helix_partner: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const synthesize: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const version: () => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
