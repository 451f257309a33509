/** Live compliance sidebar. Every number shown here is a string the
 * service produced; this module only places them in the DOM. */

import { clear, el } from "./dom.js";
import type { ScoreDoc } from "./types.js";

export function renderSidebar(container: HTMLElement, score: ScoreDoc): void {
  clear(container);
  container.append(el("h2", {}, ["Compliance"]));
  container.append(
    el("p", { class: "completion-line", "data-testid": "completion" }, [
      `${score.completion.answered} of ${score.completion.total} answered (${score.completion.percent})`,
    ]),
  );

  const list = el("ul", { class: "family-scores" });
  for (const family of score.families) {
    const row = el("li", { "data-testid": `sidebar-${family.code}` });
    row.append(el("span", { class: "fam-code" }, [family.code]));
    row.append(
      el("span", { class: "fam-points" }, [`${family.points_display}/${family.count}`]),
    );
    row.append(
      el(
        "span",
        { class: "fam-percent", "data-testid": `sidebar-${family.code}-percent` },
        [family.percent],
      ),
    );
    row.append(
      el(
        "span",
        {
          class: `badge ${family.verdict}`,
          "data-testid": `sidebar-${family.code}-verdict`,
        },
        [family.verdict],
      ),
    );
    list.append(row);
  }
  container.append(list);

  const total = el("div", { class: "total-line", "data-testid": "sidebar-total" });
  total.append(el("span", {}, ["Overall"]));
  total.append(
    el("span", { class: "total-percent", "data-testid": "sidebar-total-percent" }, [
      score.total.percent,
    ]),
  );
  total.append(
    el(
      "span",
      { class: `badge ${score.total.verdict}`, "data-testid": "sidebar-total-verdict" },
      [score.total.verdict],
    ),
  );
  container.append(total);
  container.append(
    el("p", { class: "threshold-line", "data-testid": "threshold-line" }, [
      `Pass threshold ${score.threshold_percent}`,
    ]),
  );
}
