/**
 * Reader/writer for the core's FSTN tensor file format.
 *
 * Layout: magic "FSTN", version byte (1), dtype byte (1 = f32, 2 = f64),
 * rank byte (2 or 3), rank x uint32 little-endian extents, then the raw
 * row-major little-endian payload.  Values are always surfaced as f64;
 * f32 payloads are widened on read.
 */

const MAGIC = "FSTN";
const FORMAT_VERSION = 1;

export const DTYPE_F32 = 1;
export const DTYPE_F64 = 2;

/** Contiguous row-major float buffer plus its shape. */
export interface BoundArray {
    data: Float64Array;
    shape: number[];
}

export function elementCount(shape: number[]): number {
    return shape.reduce((a, b) => a * b, 1);
}

export function encodeFstn(array: BoundArray, dtype: number = DTYPE_F64): Uint8Array {
    const rank = array.shape.length;
    if (rank !== 2 && rank !== 3) {
        throw new Error(`tensor rank must be 2 or 3, got ${rank}`);
    }
    const count = elementCount(array.shape);
    if (count !== array.data.length) {
        throw new Error(`shape ${array.shape} expects ${count} values, got ${array.data.length}`);
    }
    const width = dtype === DTYPE_F32 ? 4 : 8;
    const headerLength = 7 + 4 * rank;
    const bytes = new Uint8Array(headerLength + count * width);
    const view = new DataView(bytes.buffer);

    for (let i = 0; i < 4; i++) {
        bytes[i] = MAGIC.charCodeAt(i);
    }
    bytes[4] = FORMAT_VERSION;
    bytes[5] = dtype;
    bytes[6] = rank;
    array.shape.forEach((extent, i) => view.setUint32(7 + 4 * i, extent, true));

    let offset = headerLength;
    for (const value of array.data) {
        if (dtype === DTYPE_F32) {
            view.setFloat32(offset, value, true);
        } else {
            view.setFloat64(offset, value, true);
        }
        offset += width;
    }
    return bytes;
}

export function decodeFstn(bytes: Uint8Array): BoundArray {
    if (bytes.length < 7) {
        throw new Error(`truncated header: ${bytes.length} bytes`);
    }
    const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
    const magic = String.fromCharCode(...bytes.subarray(0, 4));
    if (magic !== MAGIC) {
        throw new Error(`bad magic ${JSON.stringify(magic)}`);
    }
    if (bytes[4] !== FORMAT_VERSION) {
        throw new Error(`unsupported format version ${bytes[4]}`);
    }
    const dtype = bytes[5];
    if (dtype !== DTYPE_F32 && dtype !== DTYPE_F64) {
        throw new Error(`unsupported dtype code ${dtype}`);
    }
    const rank = bytes[6];
    if (rank !== 2 && rank !== 3) {
        throw new Error(`rank must be 2 or 3, got ${rank}`);
    }
    const headerLength = 7 + 4 * rank;
    const shape: number[] = [];
    for (let i = 0; i < rank; i++) {
        shape.push(view.getUint32(7 + 4 * i, true));
    }
    const count = elementCount(shape);
    const width = dtype === DTYPE_F32 ? 4 : 8;
    if (bytes.length !== headerLength + count * width) {
        throw new Error(
            `payload length mismatch: expected ${count * width} bytes, `
            + `got ${bytes.length - headerLength}`,
        );
    }

    const data = new Float64Array(count);
    for (let i = 0; i < count; i++) {
        const offset = headerLength + i * width;
        data[i] = dtype === DTYPE_F32
            ? view.getFloat32(offset, true)
            : view.getFloat64(offset, true);
    }
    return { data, shape };
}
