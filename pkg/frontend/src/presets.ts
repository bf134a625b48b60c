/** The three canned queries, derived from one base text through the same
 * refinement helpers the buttons use. */
import { applyExcludeOwned, applyGenre } from "./refine.js";

export function sampleQuery(steamid: string, limit = 5): string {
  return [
    "SELECT b.name, b.cost",
    "PATTERNS V_P(a)-E_F-V_P-E_O-V_G(b) V_P(a)-E_O-V_G-E_D-V_D-E_D-V_G(b)",
    `WHERE a.steamid=${JSON.stringify(steamid)}`,
    "ORDERBY AVG(V_P(a)-E_F-V_P-E_O.attainmentRating-V_G(b))",
    `LIMIT ${limit}`,
  ].join("\n");
}

export function newGameQuery(steamid: string, limit = 5): string {
  return applyExcludeOwned(sampleQuery(steamid, limit));
}

export function strategyGenreQuery(steamid: string, limit = 5): string {
  return applyGenre(newGameQuery(steamid, limit), "Strategy");
}

export const PRESETS: { label: string; build: (steamid: string) => string }[] = [
  { label: "Sample Query", build: sampleQuery },
  { label: "New Game Query", build: newGameQuery },
  { label: "Strategy Genre Query", build: strategyGenreQuery },
];
