// DOM wiring: reads state from the URL, renders view states, and pushes
// every change back into the query string.

import { SearchController } from "./controller.js";
import { DEFAULT_PARAMS, formatParams, parseParams, type SearchParams } from "./state.js";
import type { ResultView, ViewState } from "./view.js";

const SLIDER_NAMES = ["text", "social", "static"] as const;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function renderRows(rows: ResultView[]): string {
  return rows.map((row) => `
    <li class="result">
      <span class="badge">${row.position}</span>
      <div class="body">
        <a href="${row.href}">${row.page}</a>
        <div class="bars">${SLIDER_NAMES.map((name) => `
          <span class="bar-label">${name}</span>
          <span class="bar"><span class="fill ${name}"
            style="width:${(row.bars[name] * 100).toFixed(1)}%"></span></span>`).join("")}
        </div>
      </div>
      <span class="fused">${row.fused.toFixed(3)}</span>
    </li>`).join("\n");
}

function main(): void {
  const input = el<HTMLInputElement>("query");
  const results = el<HTMLUListElement>("results");
  const status = el<HTMLParagraphElement>("status");
  const banner = el<HTMLDivElement>("error-banner");
  const sliders = SLIDER_NAMES.map((name) => el<HTMLInputElement>(`w-${name}`));
  const readouts = SLIDER_NAMES.map((name) => el<HTMLSpanElement>(`wv-${name}`));

  let params: SearchParams = parseParams(window.location.search);

  const render = (state: ViewState): void => {
    banner.hidden = state.kind !== "error";
    status.textContent = "";
    if (state.kind === "error") {
      banner.textContent = state.message;
    } else if (state.kind === "loading") {
      status.textContent = "searching…";
    } else if (state.kind === "empty") {
      status.textContent = `no results for “${state.query}”`;
      results.innerHTML = "";
    } else if (state.kind === "idle") {
      status.textContent = "type a query to search the site";
      results.innerHTML = "";
    }
    if (state.kind === "results") {
      results.innerHTML = renderRows(state.rows);
    }
  };

  const controller = new SearchController({
    onState: render,
    onParams: (next) => {
      params = next;
      const qs = formatParams(next);
      window.history.replaceState(null, "", qs ? `?${qs}` : window.location.pathname);
    },
  });

  const syncWidgets = (): void => {
    input.value = params.q;
    sliders.forEach((slider, i) => {
      slider.value = String(params.weights[i]);
      readouts[i].textContent = params.weights[i].toFixed(2);
    });
  };

  input.addEventListener("input", () => {
    if (!input.value.trim() && input.value.length > 0) {
      status.textContent = "enter at least one word";
      return;
    }
    controller.update({ ...params, q: input.value });
  });

  sliders.forEach((slider, i) => {
    slider.addEventListener("input", () => {
      const weights = [...params.weights] as SearchParams["weights"];
      weights[i] = Number(slider.value);
      readouts[i].textContent = weights[i].toFixed(2);
      controller.update({ ...params, weights });
    });
  });

  syncWidgets();
  if (params.q.trim()) {
    void controller.runSearch(params);
  } else {
    render({ kind: "idle" });
    params = { ...DEFAULT_PARAMS, ...params };
  }
}

main();
