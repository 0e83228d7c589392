"use strict";
// DOM wiring: reads state from the URL, renders view states, and pushes
// every change back into the query string.
Object.defineProperty(exports, "__esModule", { value: true });
const controller_js_1 = require("./controller.js");
const state_js_1 = require("./state.js");
const SLIDER_NAMES = ["text", "social", "static"];
function el(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing #${id}`);
    return node;
}
function renderRows(rows) {
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
function main() {
    const input = el("query");
    const results = el("results");
    const status = el("status");
    const banner = el("error-banner");
    const sliders = SLIDER_NAMES.map((name) => el(`w-${name}`));
    const readouts = SLIDER_NAMES.map((name) => el(`wv-${name}`));
    let params = (0, state_js_1.parseParams)(window.location.search);
    const render = (state) => {
        banner.hidden = state.kind !== "error";
        status.textContent = "";
        if (state.kind === "error") {
            banner.textContent = state.message;
        }
        else if (state.kind === "loading") {
            status.textContent = "searching…";
        }
        else if (state.kind === "empty") {
            status.textContent = `no results for “${state.query}”`;
            results.innerHTML = "";
        }
        else if (state.kind === "idle") {
            status.textContent = "type a query to search the site";
            results.innerHTML = "";
        }
        if (state.kind === "results") {
            results.innerHTML = renderRows(state.rows);
        }
    };
    const controller = new controller_js_1.SearchController({
        onState: render,
        onParams: (next) => {
            params = next;
            const qs = (0, state_js_1.formatParams)(next);
            window.history.replaceState(null, "", qs ? `?${qs}` : window.location.pathname);
        },
    });
    const syncWidgets = () => {
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
            const weights = [...params.weights];
            weights[i] = Number(slider.value);
            readouts[i].textContent = weights[i].toFixed(2);
            controller.update({ ...params, weights });
        });
    });
    syncWidgets();
    if (params.q.trim()) {
        void controller.runSearch(params);
    }
    else {
        render({ kind: "idle" });
        params = { ...state_js_1.DEFAULT_PARAMS, ...params };
    }
}
main();
