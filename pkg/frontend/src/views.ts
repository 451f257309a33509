/** Radar and adversary-effects views rendered from service output. */

import { clear, el } from "./dom.js";
import type { EffectsDoc } from "./types.js";

export function renderRadarView(container: HTMLElement, url: string): void {
  clear(container);
  container.append(
    el("div", { class: "radar-wrap" }, [
      el("img", {
        class: "radar-img",
        "data-testid": "radar-img",
        src: url,
        alt: "Per-family compliance radar chart",
      }),
    ]),
  );
}

export function renderEffectsView(container: HTMLElement, doc: EffectsDoc): void {
  clear(container);
  const table = el("table", { class: "effects-table", "data-testid": "effects-table" });
  const head = el("tr", {}, [
    el("th", {}, ["Family"]),
    el("th", {}, ["Requirement"]),
    el("th", {}, ["Code"]),
  ]);
  for (const column of doc.columns) {
    head.append(el("th", {}, [column]));
  }
  table.append(el("thead", {}, [head]));

  const body = el("tbody");
  for (const row of doc.rows) {
    const tr = el("tr", {
      class: row.unanswered ? "unanswered" : "",
      "data-testid": `effects-${row.requirement_id}`,
    });
    tr.append(el("td", {}, [row.family_code]));
    tr.append(el("td", {}, [row.requirement_id]));
    tr.append(el("td", {}, [row.unanswered ? "-" : row.code]));
    if (row.no_effects_listed) {
      tr.append(
        el("td", { colspan: String(doc.columns.length) }, [
          el(
            "span",
            { class: "no-effects", "data-testid": `no-effects-${row.requirement_id}` },
            [doc.no_effects_label],
          ),
        ]),
      );
    } else {
      for (const cell of row.cells) {
        const cls = cell === "Yes" ? "cell-yes" : cell === "No" ? "cell-no" : "";
        tr.append(el("td", { class: cls }, [cell]));
      }
    }
    body.append(tr);
  }
  table.append(body);
  container.append(table);
}
