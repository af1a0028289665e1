// Pure explorer state and its transitions. No DOM, no fetch: everything
// here is exercised directly by the unit tests.

import type { HistogramData, MethodName, ThresholdResult, UploadInfo } from "./api.js";

export const INITIAL_T = 128;

export interface ExplorerState {
    imageId: string;
    width: number;
    height: number;
    currentT: number;
    counts: number[];
    total: number;
    autoResults: Partial<Record<MethodName, ThresholdResult>>;
    foregroundFraction: number;
}

// slider, numeric box and histogram clicks all funnel through this
export function clampLevel(raw: number): number {
    if (!Number.isFinite(raw)) return 0;
    return Math.min(255, Math.max(0, Math.round(raw)));
}

// fraction of pixels strictly above t, straight from the server histogram
export function fractionAbove(counts: number[], total: number, t: number): number {
    if (total === 0) return 0;
    let above = 0;
    for (let i = t + 1; i < counts.length; i++) above += counts[i];
    return above / total;
}

export function loadedState(upload: UploadInfo, histogram: HistogramData): ExplorerState {
    return {
        imageId: upload.id,
        width: upload.width,
        height: upload.height,
        currentT: INITIAL_T,
        counts: histogram.counts,
        total: histogram.total,
        autoResults: {},
        foregroundFraction: fractionAbove(histogram.counts, histogram.total, INITIAL_T),
    };
}

export function withThreshold(state: ExplorerState, raw: number): ExplorerState {
    const t = clampLevel(raw);
    return {
        ...state,
        currentT: t,
        foregroundFraction: fractionAbove(state.counts, state.total, t),
    };
}

// records the server's answer and jumps the slider to it
export function withAutoResult(
    state: ExplorerState,
    method: MethodName,
    result: ThresholdResult,
): ExplorerState {
    const next = withThreshold(state, result.t);
    next.autoResults = { ...state.autoResults, [method]: result };
    return next;
}

export function markerEntries(
    state: ExplorerState,
): Array<{ method: MethodName; t: number }> {
    const entries: Array<{ method: MethodName; t: number }> = [];
    for (const [method, result] of Object.entries(state.autoResults)) {
        if (result) entries.push({ method: method as MethodName, t: result.t });
    }
    return entries;
}
