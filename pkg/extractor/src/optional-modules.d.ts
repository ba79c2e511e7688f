// Optional dependency, loaded dynamically; typed as `any` on purpose so the
// package compiles without it installed.
declare module '@huggingface/transformers';
