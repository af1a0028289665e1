// Typed client for the thresholding service. Every number the UI shows
// comes through here; the client never computes thresholds itself.

export type MethodName = "mean" | "ptile" | "hdt" | "emt";

export const METHOD_NAMES: MethodName[] = ["mean", "ptile", "hdt", "emt"];

export interface UploadInfo {
    id: string;
    width: number;
    height: number;
}

export interface HistogramData {
    counts: number[];
    total: number;
}

export interface ThresholdResult {
    method: string;
    t: number;
    criterion: number | null;
    params: Record<string, number>;
}

export interface ThresholdParams {
    p?: number;
    edge_percentile?: number;
}

export class ApiError extends Error {
    constructor(readonly status: number, message: string) {
        super(message);
    }
}

export class NoEdgesError extends ApiError {
    constructor(message: string) {
        super(409, message);
    }
}

async function errorMessage(response: Response): Promise<string> {
    try {
        const body = await response.json();
        const detail = body?.detail;
        if (typeof detail === "string") return detail;
        if (detail && typeof detail.message === "string") return detail.message;
    } catch {
        // non-JSON error body, fall through
    }
    return `request failed with status ${response.status}`;
}

export class ApiClient {
    constructor(private readonly base: string = "") {}

    async upload(file: Blob): Promise<UploadInfo> {
        const response = await fetch(`${this.base}/api/images`, {
            method: "POST",
            body: file,
        });
        if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
        return response.json();
    }

    async histogram(imageId: string): Promise<HistogramData> {
        const response = await fetch(`${this.base}/api/images/${imageId}/histogram`);
        if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
        return response.json();
    }

    async threshold(
        imageId: string,
        method: MethodName,
        params: ThresholdParams = {},
    ): Promise<ThresholdResult> {
        const query = new URLSearchParams({ method });
        if (params.p !== undefined) query.set("p", String(params.p));
        if (params.edge_percentile !== undefined) {
            query.set("edge_percentile", String(params.edge_percentile));
        }
        const response = await fetch(
            `${this.base}/api/images/${imageId}/threshold?${query}`,
        );
        if (response.status === 409) throw new NoEdgesError(await errorMessage(response));
        if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
        return response.json();
    }

    // PNG preview of the binarized image; caller owns the object URL.
    async binaryPreview(imageId: string, t: number): Promise<Blob> {
        const response = await fetch(`${this.base}/api/images/${imageId}/binary?t=${t}`);
        if (!response.ok) throw new ApiError(response.status, await errorMessage(response));
        return response.blob();
    }
}
