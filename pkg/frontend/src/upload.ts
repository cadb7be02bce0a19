/** Client-side validation for the upload-and-detect view. */

export const MAX_FILE_BYTES = 1024 * 1024;
export const MAX_URLS = 1000;

export class UploadError extends Error {}

/** Split an uploaded URL list into lines; blanks and #-comments ignored. */
export function parseUrlList(text: string): string[] {
  const urls = text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0 && !line.startsWith("#"));
  if (urls.length === 0) {
    throw new UploadError("The file contains no URLs.");
  }
  if (urls.length > MAX_URLS) {
    throw new UploadError(`At most ${MAX_URLS} URLs per upload.`);
  }
  return urls;
}

/** Reject oversized files before any request is sent. */
export function checkFileSize(sizeBytes: number): void {
  if (sizeBytes > MAX_FILE_BYTES) {
    throw new UploadError("File exceeds 1 MiB.");
  }
}
