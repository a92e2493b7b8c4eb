// Client-side template rendering. The semantics mirror the service exactly:
// "{name}" is a slot, everything else is literal text, no escapes. The live
// preview produced here must be character-identical to the server's render
// for the same fillers; tests cross-check against POST /render.

export type Segment =
  | { kind: "literal"; text: string }
  | { kind: "slot"; name: string };

const SLOT_NAME = /^[A-Za-z_][A-Za-z0-9_]*$/;

export function parsePattern(text: string): Segment[] {
  const segments: Segment[] = [];
  let buffer = "";
  let i = 0;
  while (i < text.length) {
    const ch = text[i];
    if (ch === "{") {
      const end = text.indexOf("}", i + 1);
      if (end === -1) throw new Error(`unclosed '{' at index ${i}`);
      const name = text.slice(i + 1, end);
      if (name.includes("{")) throw new Error(`nested '{' inside slot at index ${i}`);
      if (!SLOT_NAME.test(name)) throw new Error(`invalid slot name ${JSON.stringify(name)}`);
      if (buffer) {
        segments.push({ kind: "literal", text: buffer });
        buffer = "";
      }
      segments.push({ kind: "slot", name });
      i = end + 1;
    } else if (ch === "}") {
      throw new Error(`stray '}' at index ${i}`);
    } else {
      buffer += ch;
      i += 1;
    }
  }
  if (buffer) segments.push({ kind: "literal", text: buffer });
  return segments;
}

export function slotNames(pattern: string): string[] {
  return parsePattern(pattern)
    .filter((s): s is { kind: "slot"; name: string } => s.kind === "slot")
    .map((s) => s.name);
}

/**
 * Render a pattern with fillers. Slots missing from the map fall back to
 * their "{name}" placeholder so partial drafts still preview readably;
 * with a complete filler map the result equals the server render.
 */
export function renderPattern(
  pattern: string,
  fillers: Record<string, string>,
): string {
  return parsePattern(pattern)
    .map((segment) =>
      segment.kind === "literal"
        ? segment.text
        : (fillers[segment.name] ?? `{${segment.name}}`),
    )
    .join("");
}
