import { ApiClient, RankingsResponse } from "./api.js";
import {
  DEBOUNCE_MS,
  ExplorerController,
  WEIGHT_MAX,
  WEIGHT_MIN,
  WEIGHT_STEP,
} from "./controller.js";
import { buildTableRows, formatRho } from "./model.js";
import { displayedOrder, renderBanner, renderTable } from "./render.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing #${id}`);
  }
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  const banner = el<HTMLDivElement>("banner");
  const tableHost = el<HTMLDivElement>("table-host");
  const rhoOut = el<HTMLSpanElement>("rho");
  const sliderHost = el<HTMLDivElement>("sliders");

  let meta;
  let rankings: RankingsResponse;
  try {
    meta = await api.meta();
    rankings = await api.rankings();
  } catch (error) {
    renderBanner(banner, `cannot reach the ranking server: ${error}`);
    return;
  }

  const controller = new ExplorerController(
    api,
    meta.default_weights,
    {
      onAggregate: (response, weights) => {
        renderBanner(banner, null);
        const rows = buildTableRows(response, rankings, meta.experts);
        renderTable(document, tableHost, rows, meta.experts);
        rhoOut.textContent = formatRho(response.rho);
        weights.forEach((w, j) => {
          el<HTMLSpanElement>(`weight-value-${j}`).textContent = w.toFixed(2);
        });
      },
      onError: (message) => {
        renderBanner(banner, `update failed (showing last good table): ${message}`);
      },
    },
    DEBOUNCE_MS,
  );

  meta.experts.forEach((expert, j) => {
    const wrapper = document.createElement("label");
    wrapper.className = "slider";
    const name = document.createElement("span");
    name.textContent = expert;
    const value = document.createElement("span");
    value.id = `weight-value-${j}`;
    value.className = "weight-value";
    value.textContent = controller.weights[j].toFixed(2);
    const input = document.createElement("input");
    input.type = "range";
    input.min = String(WEIGHT_MIN);
    input.max = String(WEIGHT_MAX);
    input.step = String(WEIGHT_STEP);
    input.value = String(controller.weights[j]);
    input.addEventListener("input", () => {
      value.textContent = Number(input.value).toFixed(2);
      controller.setWeight(j, Number(input.value));
    });
    wrapper.append(name, input, value);
    sliderHost.appendChild(wrapper);
  });

  await controller.refresh();
}

declare global {
  interface Window {
    rankaggExplorer: { displayedOrder: () => string[] };
  }
}

window.rankaggExplorer = {
  displayedOrder: () => displayedOrder(el<HTMLDivElement>("table-host")),
};

void boot();
