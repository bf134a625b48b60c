/** Console wiring: editor, presets, refinements, results, histograms. */
import { ApiClient, ApiError } from "./api.js";
import { PRESETS } from "./presets.js";
import { applyExcludeOwned, applyGenre, hasRefinableVariables } from "./refine.js";
import { errorSnippet, renderHistogram, renderTable } from "./render.js";
import { RequestSequencer } from "./state.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const editor = $<HTMLTextAreaElement>("editor");
const runButton = $<HTMLButtonElement>("run");
const playerInput = $<HTMLInputElement>("player");
const apiBaseInput = $<HTMLInputElement>("api-base");
const presetMenu = $<HTMLSelectElement>("presets");
const excludeButton = $<HTMLButtonElement>("exclude-owned");
const genreButton = $<HTMLButtonElement>("genre-filter");
const genreInput = $<HTMLInputElement>("genre-name");
const resultsBox = $<HTMLDivElement>("results");
const errorBox = $<HTMLPreElement>("error");
const statusBox = $<HTMLSpanElement>("status");
const histogramsBox = $<HTMLDivElement>("histograms");
const histogramsButton = $<HTMLButtonElement>("load-histograms");

const sequencer = new RequestSequencer();

function client(): ApiClient {
  return new ApiClient(apiBaseInput.value.replace(/\/$/, ""));
}

function setError(message: string, snippet = "") {
  errorBox.textContent = snippet ? `${message}\n${snippet}` : message;
  errorBox.hidden = !message;
}

function refreshControls() {
  runButton.disabled = editor.value.trim() === "";
  const refinable = hasRefinableVariables(editor.value);
  for (const button of [excludeButton, genreButton]) {
    button.disabled = !refinable;
    button.title = refinable
      ? ""
      : "needs a player variable V_P(a) and game variable V_G(b)";
  }
}

async function runQuery() {
  const text = editor.value;
  const id = sequencer.begin();
  statusBox.textContent = "running...";
  try {
    const response = await client().runQuery(text);
    if (!sequencer.accept(id)) return;
    setError("");
    resultsBox.replaceChildren(renderTable(response));
    statusBox.textContent = `${response.rows.length} of ${response.total_rows} rows in ${response.elapsed_ms.toFixed(1)} ms`;
  } catch (err) {
    if (!sequencer.accept(id)) return;
    statusBox.textContent = "";
    if (err instanceof ApiError && "line" in err.detail) {
      const { line, column, message } = err.detail;
      setError(message, errorSnippet(text, line, column));
    } else {
      setError(err instanceof Error ? `request failed: ${err.message}` : "request failed");
    }
  }
}

async function loadHistograms() {
  try {
    const specs = await client().attainmentHistograms(50, true);
    histogramsBox.replaceChildren(...specs.map(renderHistogram));
  } catch (err) {
    setError(err instanceof Error ? `histograms failed: ${err.message}` : "histograms failed");
  }
}

presetMenu.replaceChildren(
  new Option("choose a preset...", ""),
  ...PRESETS.map((preset) => new Option(preset.label, preset.label)),
);
presetMenu.addEventListener("change", () => {
  const preset = PRESETS.find((p) => p.label === presetMenu.value);
  if (preset) {
    editor.value = preset.build(playerInput.value.trim());
    refreshControls();
  }
});

excludeButton.addEventListener("click", () => {
  editor.value = applyExcludeOwned(editor.value);
  refreshControls();
});
genreButton.addEventListener("click", () => {
  const genre = genreInput.value.trim();
  if (genre) {
    editor.value = applyGenre(editor.value, genre);
    refreshControls();
  }
});

editor.addEventListener("input", refreshControls);
runButton.addEventListener("click", () => void runQuery());
histogramsButton.addEventListener("click", () => void loadHistograms());

client()
  .schema()
  .then((schema) => {
    const players = schema.vertices.find((v) => v.kind === "Player");
    const games = schema.vertices.find((v) => v.kind === "Game");
    statusBox.textContent = `connected: ${players?.count ?? 0} players, ${games?.count ?? 0} games`;
  })
  .catch(() => {
    statusBox.textContent = "api unreachable";
  });

refreshControls();
