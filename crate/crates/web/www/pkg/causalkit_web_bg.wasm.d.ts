/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const band_raster: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const band_slice_radius: (a: number) => number;
export const retarded_impulse: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const sigma_minus: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
