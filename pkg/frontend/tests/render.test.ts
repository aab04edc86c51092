// @vitest-environment happy-dom
import { describe, expect, it } from "vitest";

import { displayedOrder, renderBanner, renderTable } from "../src/render.js";
import { TableRow } from "../src/model.js";

function host(): HTMLElement {
  const div = document.createElement("div");
  document.body.appendChild(div);
  return div;
}

const rows: TableRow[] = [
  {
    rank: 1,
    item: "alpha",
    rawScore: -2.5,
    perSource: [{ source: "s1", known: 1, extended: 0.25 }],
  },
  {
    rank: 2.5,
    item: "beta",
    rawScore: -1.0,
    perSource: [{ source: "s1", known: null, extended: 0.625 }],
  },
  {
    rank: 2.5,
    item: "gamma",
    rawScore: -1.0,
    perSource: [{ source: "s1", known: 3, extended: 0.75 }],
  },
];

describe("renderTable", () => {
  it("renders one row per item in order", () => {
    const container = host();
    renderTable(document, container, rows, ["s1"]);
    expect(container.querySelectorAll("tr")).toHaveLength(4); // header + 3
    expect(displayedOrder(container)).toEqual(["alpha", "beta", "gamma"]);
  });

  it("shows an em dash with the imputed value on hover for missing ranks", () => {
    const container = host();
    renderTable(document, container, rows, ["s1"]);
    const cells = container.querySelectorAll("td.source");
    expect(cells[1].textContent).toBe("—");
    expect(cells[1].getAttribute("title")).toContain("0.6250");
    expect(cells[0].textContent).toBe("1");
  });

  it("displays shared fractional ranks for ties", () => {
    const container = host();
    renderTable(document, container, rows, ["s1"]);
    const rankCells = Array.from(container.querySelectorAll("td.rank")).map(
      (td) => td.textContent,
    );
    expect(rankCells).toEqual(["1", "2.5", "2.5"]);
  });

  it("renders an empty-state message for an empty dataset", () => {
    const container = host();
    renderTable(document, container, [], ["s1"]);
    expect(container.querySelector("table")).toBeNull();
    expect(container.querySelector(".empty-state")?.textContent).toContain("No items");
  });

  it("replaces previous content on re-render", () => {
    const container = host();
    renderTable(document, container, rows, ["s1"]);
    renderTable(document, container, rows.slice(0, 1), ["s1"]);
    expect(displayedOrder(container)).toEqual(["alpha"]);
  });
});

describe("renderBanner", () => {
  it("shows and hides the message", () => {
    const banner = host();
    renderBanner(banner, "something broke");
    expect(banner.textContent).toBe("something broke");
    expect(banner.style.display).toBe("block");
    renderBanner(banner, null);
    expect(banner.textContent).toBe("");
    expect(banner.style.display).toBe("none");
  });
});
