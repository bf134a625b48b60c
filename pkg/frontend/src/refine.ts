/** Clause-aware query text manipulation for one-click refinements.
 *
 * The server owns parsing; this module only slices the text into its
 * top-level clauses (SELECT / PATTERNS / ANTIPATTERNS / WHERE / ORDERBY /
 * LIMIT, never inside string literals) so refinements can insert a clause
 * in the right place while keeping the query visible and editable.
 */

export const EXCLUDE_OWNED_PATTERN = "V_P(a)-E_O-V_G(b)";
export const GENRE_PATTERN = "V_G(b)-E_R-V_R";

const CLAUSES = ["SELECT", "PATTERNS", "ANTIPATTERNS", "WHERE", "ORDERBY", "LIMIT"] as const;
type Clause = (typeof CLAUSES)[number];

export interface Sections {
  order: Clause[];
  body: Partial<Record<Clause, string>>;
}

function isWordChar(c: string): boolean {
  return /[A-Za-z0-9_]/.test(c);
}

/** Split query text into clause bodies; keyword matching ignores case and
 * skips quoted strings. */
export function splitClauses(text: string): Sections {
  const marks: { clause: Clause; start: number; end: number }[] = [];
  let i = 0;
  while (i < text.length) {
    const c = text[i];
    if (c === '"') {
      i += 1;
      while (i < text.length && text[i] !== '"') {
        i += text[i] === "\\" ? 2 : 1;
      }
      i += 1;
      continue;
    }
    if (isWordChar(c) && (i === 0 || !isWordChar(text[i - 1]))) {
      let j = i;
      while (j < text.length && isWordChar(text[j])) j += 1;
      const word = text.slice(i, j).toUpperCase();
      if ((CLAUSES as readonly string[]).includes(word)) {
        marks.push({ clause: word as Clause, start: i, end: j });
      }
      i = j;
      continue;
    }
    i += 1;
  }
  const sections: Sections = { order: [], body: {} };
  for (let k = 0; k < marks.length; k += 1) {
    const { clause, end } = marks[k];
    const until = k + 1 < marks.length ? marks[k + 1].start : text.length;
    sections.order.push(clause);
    sections.body[clause] = text.slice(end, until).trim();
  }
  return sections;
}

/** Reassemble sections in canonical clause order, one clause per line. */
export function joinClauses(sections: Sections): string {
  const lines: string[] = [];
  for (const clause of CLAUSES) {
    const body = sections.body[clause];
    if (body !== undefined && body !== "") {
      lines.push(`${clause} ${body}`);
    }
  }
  return lines.join("\n");
}

function squash(text: string): string {
  return text.replace(/\s+/g, "");
}

function containsFragment(body: string | undefined, fragment: string): boolean {
  return body !== undefined && squash(body).includes(squash(fragment));
}

/** Both refinements hardcode the player variable `a` and game variable `b`. */
export function hasRefinableVariables(text: string): boolean {
  const { body } = splitClauses(text);
  const patterns = body.PATTERNS ?? "";
  return /V_P\s*\(\s*a\s*\)/i.test(patterns) && /V_G\s*\(\s*b\s*\)/i.test(patterns);
}

/** Add the "not already owned" antipattern; idempotent. */
export function applyExcludeOwned(text: string): string {
  const sections = splitClauses(text);
  if (containsFragment(sections.body.ANTIPATTERNS, EXCLUDE_OWNED_PATTERN)) {
    return joinClauses(sections);
  }
  const existing = sections.body.ANTIPATTERNS;
  sections.body.ANTIPATTERNS = existing
    ? `${existing} ${EXCLUDE_OWNED_PATTERN}`
    : EXCLUDE_OWNED_PATTERN;
  return joinClauses(sections);
}

function quote(value: string): string {
  return '"' + value.replace(/\\/g, "\\\\").replace(/"/g, '\\"') + '"';
}

/** Restrict results to one genre: adds the genre pattern and condition;
 * idempotent per genre name. */
export function applyGenre(text: string, genre: string): string {
  const sections = splitClauses(text);
  if (!containsFragment(sections.body.PATTERNS, GENRE_PATTERN)) {
    sections.body.PATTERNS = `${sections.body.PATTERNS ?? ""} ${GENRE_PATTERN}`.trim();
  }
  const condition = `V_R.description=${quote(genre)}`;
  if (!containsFragment(sections.body.WHERE, condition)) {
    const existing = sections.body.WHERE;
    sections.body.WHERE = existing ? `${existing} AND ${condition}` : condition;
  }
  return joinClauses(sections);
}
