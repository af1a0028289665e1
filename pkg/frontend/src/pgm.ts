// Display-only PGM reader so the original image can be drawn before any
// server round trip. P2/P5, maxval 255, '#' comments. Thresholding stays
// on the server; this never touches pixel values beyond copying them.

export interface RawGray {
    width: number;
    height: number;
    pixels: Uint8ClampedArray<ArrayBuffer>; // row-major
}

export function isPgm(bytes: Uint8Array): boolean {
    return bytes.length >= 2 && bytes[0] === 0x50 && (bytes[1] === 0x32 || bytes[1] === 0x35);
}

const WHITESPACE = new Set([0x20, 0x09, 0x0a, 0x0d, 0x0b, 0x0c]);

function nextToken(bytes: Uint8Array, pos: number): [string, number] {
    while (pos < bytes.length) {
        if (bytes[pos] === 0x23) {
            // comment runs to end of line
            while (pos < bytes.length && bytes[pos] !== 0x0a) pos++;
        } else if (WHITESPACE.has(bytes[pos])) {
            pos++;
        } else {
            break;
        }
    }
    const start = pos;
    while (pos < bytes.length && !WHITESPACE.has(bytes[pos]) && bytes[pos] !== 0x23) pos++;
    if (start === pos) throw new Error("truncated header");
    return [String.fromCharCode(...bytes.subarray(start, pos)), pos];
}

export function parsePgm(buffer: ArrayBuffer): RawGray {
    const bytes = new Uint8Array(buffer);
    if (!isPgm(bytes)) throw new Error("not a PGM stream");
    const binary = bytes[1] === 0x35;
    let pos = 2;
    let token: string;
    [token, pos] = nextToken(bytes, pos);
    const width = parseInt(token, 10);
    [token, pos] = nextToken(bytes, pos);
    const height = parseInt(token, 10);
    [token, pos] = nextToken(bytes, pos);
    const maxval = parseInt(token, 10);
    if (!(width >= 1) || !(height >= 1)) throw new Error("bad dimensions");
    if (maxval !== 255) throw new Error(`unsupported maxval ${maxval}`);

    const n = width * height;
    const pixels = new Uint8ClampedArray(n);
    if (binary) {
        pos += 1; // single whitespace byte after maxval
        if (bytes.length - pos < n) throw new Error("truncated pixel data");
        pixels.set(bytes.subarray(pos, pos + n));
    } else {
        for (let i = 0; i < n; i++) {
            [token, pos] = nextToken(bytes, pos);
            const v = parseInt(token, 10);
            if (!(v >= 0 && v <= 255)) throw new Error(`pixel out of range: ${token}`);
            pixels[i] = v;
        }
    }
    return { width, height, pixels };
}

// expand gray to RGBA for putImageData
export function toRgba(gray: RawGray): Uint8ClampedArray<ArrayBuffer> {
    const out = new Uint8ClampedArray(gray.width * gray.height * 4);
    for (let i = 0; i < gray.pixels.length; i++) {
        const v = gray.pixels[i];
        out[i * 4] = v;
        out[i * 4 + 1] = v;
        out[i * 4 + 2] = v;
        out[i * 4 + 3] = 255;
    }
    return out;
}
