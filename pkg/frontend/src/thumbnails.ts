/** Thumbnail rules: image-extension URIs render as pictures, everything else as cards. */

const IMAGE_EXTENSIONS = [".jpg", ".jpeg", ".png", ".gif", ".bmp", ".webp"];

export function isImageUri(identifier: string): boolean {
  if (!identifier.includes("://")) return false;
  const lower = identifier.toLowerCase();
  return IMAGE_EXTENSIONS.some((extension) => lower.endsWith(extension));
}

/** The image-base relative path for a URI: its last path segment. */
export function imagePathFor(identifier: string): string {
  const withoutQuery = identifier.split(/[?#]/, 1)[0];
  const segments = withoutQuery.split("/");
  return segments[segments.length - 1];
}
