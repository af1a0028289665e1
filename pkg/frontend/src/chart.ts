// Histogram bar geometry, kept free of canvas calls so the math is
// testable. All coordinates are in chart pixels, origin top-left.

export interface Bar {
    x: number;
    width: number;
    height: number;
}

export const BIN_COUNT = 256;

// heights scale to the tallest bin; log mode compresses dominant peaks
export function barHeights(counts: number[], chartHeight: number, log: boolean): number[] {
    const scale = (c: number) => (log ? Math.log1p(c) : c);
    let max = 0;
    for (const c of counts) max = Math.max(max, scale(c));
    if (max === 0) return counts.map(() => 0);
    return counts.map((c) => (scale(c) / max) * chartHeight);
}

export function layoutBars(counts: number[], chartWidth: number, chartHeight: number, log: boolean): Bar[] {
    const heights = barHeights(counts, chartHeight, log);
    const barWidth = chartWidth / BIN_COUNT;
    return heights.map((height, i) => ({ x: i * barWidth, width: barWidth, height }));
}

// x of the vertical marker for gray level t (center of its bin)
export function markerX(t: number, chartWidth: number): number {
    return ((t + 0.5) * chartWidth) / BIN_COUNT;
}

// inverse of markerX for histogram clicks
export function levelAtX(x: number, chartWidth: number): number {
    const bin = Math.floor((x / chartWidth) * BIN_COUNT);
    return Math.min(BIN_COUNT - 1, Math.max(0, bin));
}
