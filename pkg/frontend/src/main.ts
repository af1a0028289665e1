// DOM wiring for the threshold explorer. All numbers shown come from the
// server; this file only moves them between widgets.

import { ApiClient, ApiError, METHOD_NAMES, NoEdgesError } from "./api.js";
import type { MethodName } from "./api.js";
import { layoutBars, levelAtX, markerX } from "./chart.js";
import { RawGray, isPgm, parsePgm, toRgba } from "./pgm.js";
import { Coalescer, LatestWins } from "./scheduler.js";
import {
    ExplorerState,
    clampLevel,
    loadedState,
    markerEntries,
    withAutoResult,
    withThreshold,
} from "./state.js";

const $ = <T extends HTMLElement>(id: string): T => {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el as T;
};

const fileInput = $<HTMLInputElement>("file");
const slider = $<HTMLInputElement>("slider");
const numBox = $<HTMLInputElement>("num");
const pBox = $<HTMLInputElement>("p");
const qBox = $<HTMLInputElement>("edge-percentile");
const logToggle = $<HTMLInputElement>("log-scale");
const chart = $<HTMLCanvasElement>("chart");
const original = $<HTMLCanvasElement>("original");
const preview = $<HTMLImageElement>("preview");
const fractionOut = $<HTMLElement>("fraction");
const dimsOut = $<HTMLElement>("dims");
const banner = $<HTMLElement>("banner");
const warnBadge = $<HTMLElement>("stale-warning");

const MARKER_COLORS: Record<MethodName, string> = {
    mean: "#d97706",
    ptile: "#059669",
    hdt: "#dc2626",
    emt: "#7c3aed",
};

// ?api=<base> lets the bundle run from any static host
const apiBase = new URLSearchParams(location.search).get("api") ?? "";
const api = new ApiClient(apiBase);

let state: ExplorerState | null = null;
let previewUrl: string | null = null;
const previewStamps = new LatestWins();
const dragCoalescer = new Coalescer(50); // ~20 requests/s while dragging

function showBanner(message: string): void {
    banner.textContent = message;
    banner.hidden = false;
}

function clearBanner(): void {
    banner.hidden = true;
}

function drawChart(): void {
    const ctx = chart.getContext("2d");
    if (!ctx || !state) return;
    const { width, height } = chart;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#64748b";
    for (const bar of layoutBars(state.counts, width, height, logToggle.checked)) {
        ctx.fillRect(bar.x, height - bar.height, Math.max(1, bar.width - 0.3), bar.height);
    }
    for (const { method, t } of markerEntries(state)) {
        const x = markerX(t, width);
        ctx.strokeStyle = MARKER_COLORS[method];
        ctx.beginPath();
        ctx.moveTo(x, 0);
        ctx.lineTo(x, height);
        ctx.stroke();
        ctx.fillStyle = MARKER_COLORS[method];
        ctx.fillText(`${method} ${t}`, Math.min(x + 3, width - 52), 10);
    }
    const x = markerX(state.currentT, width);
    ctx.strokeStyle = "#0f172a";
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, height);
    ctx.stroke();
    ctx.lineWidth = 1;
}

// keep slider, numeric input and marker in agreement
function render(): void {
    if (!state) return;
    slider.value = String(state.currentT);
    numBox.value = String(state.currentT);
    fractionOut.textContent = state.foregroundFraction.toFixed(4);
    dimsOut.textContent = `${state.width}×${state.height}, t=${state.currentT}`;
    drawChart();
}

async function refreshPreview(): Promise<void> {
    if (!state) return;
    const stamp = previewStamps.begin();
    const { imageId, currentT } = state;
    try {
        const blob = await api.binaryPreview(imageId, currentT);
        if (!previewStamps.isCurrent(stamp)) return; // stale, a newer drag won
        if (previewUrl) URL.revokeObjectURL(previewUrl);
        previewUrl = URL.createObjectURL(blob);
        preview.src = previewUrl;
        warnBadge.hidden = true;
    } catch {
        if (previewStamps.isCurrent(stamp)) warnBadge.hidden = false; // keep stale preview
    }
}

function setThreshold(raw: number): void {
    if (!state) return;
    state = withThreshold(state, raw);
    render();
    dragCoalescer.schedule(() => void refreshPreview());
}

function drawOriginal(gray: RawGray): void {
    original.width = gray.width;
    original.height = gray.height;
    const ctx = original.getContext("2d");
    if (!ctx) return;
    ctx.putImageData(new ImageData(toRgba(gray), gray.width, gray.height), 0, 0);
}

async function drawOriginalFromBrowserImage(file: Blob): Promise<void> {
    const bitmap = await createImageBitmap(file);
    original.width = bitmap.width;
    original.height = bitmap.height;
    original.getContext("2d")?.drawImage(bitmap, 0, 0);
}

async function loadImage(file: File): Promise<void> {
    try {
        const buffer = await file.arrayBuffer();
        const upload = await api.upload(new Blob([buffer]));
        const histogram = await api.histogram(upload.id);
        state = loadedState(upload, histogram);
        clearBanner();
        for (const button of methodButtons.values()) {
            button.disabled = false;
            button.title = "";
        }
        const bytes = new Uint8Array(buffer);
        if (isPgm(bytes)) {
            drawOriginal(parsePgm(buffer));
        } else {
            await drawOriginalFromBrowserImage(file);
        }
        render();
        await refreshPreview();
    } catch (err) {
        // failed load leaves previous state untouched
        showBanner(err instanceof ApiError ? err.message : `could not load: ${err}`);
    }
}

async function runAutoMethod(method: MethodName, button: HTMLButtonElement): Promise<void> {
    if (!state) return;
    try {
        const result = await api.threshold(state.imageId, method, {
            p: Number(pBox.value),
            edge_percentile: Number(qBox.value),
        });
        state = withAutoResult(state, method, result);
        render();
        await refreshPreview();
    } catch (err) {
        if (err instanceof NoEdgesError) {
            button.disabled = true;
            button.title = err.message;
            showBanner(`${method}: ${err.message}`);
        } else {
            showBanner(err instanceof ApiError ? err.message : String(err));
        }
    }
}

const methodButtons = new Map<MethodName, HTMLButtonElement>();
for (const method of METHOD_NAMES) {
    const button = $<HTMLButtonElement>(`run-${method}`);
    methodButtons.set(method, button);
    button.addEventListener("click", () => void runAutoMethod(method, button));
}

fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (file) void loadImage(file);
});
slider.addEventListener("input", () => setThreshold(clampLevel(Number(slider.value))));
numBox.addEventListener("change", () => setThreshold(clampLevel(Number(numBox.value))));
logToggle.addEventListener("change", drawChart);
chart.addEventListener("click", (ev: MouseEvent) => {
    const rect = chart.getBoundingClientRect();
    const x = ((ev.clientX - rect.left) / rect.width) * chart.width;
    setThreshold(levelAtX(x, chart.width));
});
