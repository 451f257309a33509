/** Requirement editor: satisfaction entry, partial credit, statements,
 * names, tools, HIPAA safeguard tags, parameter values, and the method
 * grid for enhanced-tier requirements.
 *
 * The editor never computes scores. It collects form values, hands them
 * to the app's submit callbacks, and renders any validation messages the
 * service sends back.
 */

import { ValidationError } from "./api.js";
import type { MethodMatrixPayload, ResponsePayload } from "./api.js";
import { clear, el } from "./dom.js";
import type { MethodSpecDoc, RequirementDoc, ResponseDoc } from "./types.js";
import {
  ASSESSMENT_METHODS,
  HIPAA_TYPES,
  METHOD_ATTRIBUTES,
  PARTIAL_SHORTCUTS,
  SATISFACTION_CODES,
  SATISFACTION_LABELS,
} from "./types.js";

export interface MethodSeed {
  depth: string | null;
  coverage: string | null;
}

export interface EditorSeed {
  satisfaction: string | null;
  partialValue: number | null;
  statement: string;
  names: string;
  tools: string;
  hipaa: string[];
  recordedBy: string;
  odpValues: Record<number, string>;
  methods: Record<string, MethodSeed>;
}

export function emptySeed(): EditorSeed {
  return {
    satisfaction: null,
    partialValue: null,
    statement: "",
    names: "",
    tools: "",
    hipaa: [],
    recordedBy: "",
    odpValues: {},
    methods: {},
  };
}

export function seedFromResponse(
  response: ResponseDoc,
  odpValues: Record<string, string> | undefined,
  matrix: { examine: MethodSpecDoc; interview: MethodSpecDoc; test: MethodSpecDoc } | undefined,
): EditorSeed {
  const seed = emptySeed();
  seed.satisfaction = response.satisfaction;
  seed.partialValue = response.partial_value;
  seed.statement = response.satisfying_statement;
  seed.names = response.names.join(", ");
  seed.tools = response.validation_tools.join(", ");
  seed.hipaa = [...response.hipaa_types];
  seed.recordedBy = response.recorded_by;
  if (odpValues !== undefined) {
    for (const [ordinal, value] of Object.entries(odpValues)) {
      seed.odpValues[Number(ordinal)] = value;
    }
  }
  if (matrix !== undefined) {
    for (const method of ASSESSMENT_METHODS) {
      seed.methods[method] = { depth: matrix[method].depth, coverage: matrix[method].coverage };
    }
  }
  return seed;
}

/** Substitute assigned parameter values into the bracketed slots of the
 * requirement text, keeping the brackets so slots stay recognizable. */
export function renderedRequirementText(
  text: string,
  odpValues: Record<number, string>,
): string {
  let ordinal = 0;
  return text.replace(/\[([^\[\]]*)\]/g, (whole) => {
    ordinal += 1;
    const assigned = odpValues[ordinal];
    return assigned !== undefined && assigned !== "" ? `[${assigned}]` : whole;
  });
}

function splitList(value: string): string[] {
  return value
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part !== "");
}

export interface EditorCallbacks {
  submitResponse(payload: Omit<ResponsePayload, "expected_revision">): Promise<void>;
  submitOdp(ordinal: number, value: string): Promise<void>;
  submitMethods(payload: Omit<MethodMatrixPayload, "expected_revision">): Promise<void>;
}

const DEFAULT_PARTIAL = 0.5;

export function renderEditor(
  container: HTMLElement,
  requirement: RequirementDoc,
  seed: EditorSeed,
  callbacks: EditorCallbacks,
): void {
  clear(container);
  let satisfaction = seed.satisfaction;
  let partial = seed.partialValue;

  const heading = el("h2", {}, [requirement.id]);
  heading.append(
    el("span", { class: "tier-chip" }, [
      requirement.tier === "enhanced" ? "enhanced" : "base",
    ]),
  );
  container.append(heading);
  container.append(
    el("p", { class: "req-text", "data-testid": "req-text" }, [
      renderedRequirementText(requirement.text, seed.odpValues),
    ]),
  );

  const errorBox = el("div", {
    class: "field-errors",
    "data-testid": "field-errors",
    hidden: "",
  });
  container.append(errorBox);

  function showErrors(messages: Record<string, string>): void {
    clear(errorBox);
    const list = el("ul");
    for (const [field, message] of Object.entries(messages)) {
      list.append(el("li", {}, [field === "" ? message : `${field}: ${message}`]));
    }
    errorBox.append(list);
    errorBox.hidden = false;
  }

  function hideErrors(): void {
    errorBox.hidden = true;
  }

  async function guarded(action: () => Promise<void>): Promise<void> {
    hideErrors();
    try {
      await action();
    } catch (error) {
      if (error instanceof ValidationError) {
        showErrors(error.fieldErrors);
      } else if (error instanceof Error) {
        showErrors({ "": error.message });
      } else {
        showErrors({ "": String(error) });
      }
    }
  }

  const satRow = el("div", { class: "sat-row" });
  const satButtons = new Map<string, HTMLButtonElement>();
  for (const code of SATISFACTION_CODES) {
    const button = el(
      "button",
      {
        type: "button",
        class: "sat-btn",
        "data-testid": `sat-${code}`,
        title: SATISFACTION_LABELS[code] ?? code,
        "aria-pressed": String(satisfaction === code),
      },
      [code],
    );
    button.addEventListener("click", () => {
      satisfaction = code;
      if (code === "P" && partial === null) {
        partial = DEFAULT_PARTIAL;
      }
      syncSatisfaction();
    });
    satButtons.set(code, button);
    satRow.append(button);
  }
  for (const [shortcut, value] of Object.entries(PARTIAL_SHORTCUTS)) {
    const button = el(
      "button",
      {
        type: "button",
        class: "shortcut-btn",
        "data-testid": `shortcut-${shortcut}`,
        title: `Partial at ${value}`,
      },
      [shortcut],
    );
    button.addEventListener("click", () => {
      satisfaction = "P";
      partial = value;
      syncSatisfaction();
    });
    satRow.append(button);
  }
  satRow.append(
    el("div", { class: "sat-legend" }, [
      "Y yes / P partial / A alternative approach / N no / D does not apply",
    ]),
  );
  container.append(satRow);

  const partialInput = el("input", {
    type: "range",
    min: "0.01",
    max: "0.99",
    step: "0.01",
    "data-testid": "partial-input",
  });
  const partialOutput = el("output", { "data-testid": "partial-output" });
  const partialRow = el("div", { class: "partial-row", "data-testid": "partial-row" }, [
    el("span", {}, ["Partial value"]),
    partialInput,
    partialOutput,
  ]);
  partialInput.addEventListener("input", () => {
    partial = Number(partialInput.value);
    partialOutput.textContent = partial.toFixed(2);
  });
  container.append(partialRow);

  function syncSatisfaction(): void {
    for (const [code, button] of satButtons) {
      button.setAttribute("aria-pressed", String(satisfaction === code));
    }
    const showPartial = satisfaction === "P";
    partialRow.hidden = !showPartial;
    if (showPartial) {
      const value = partial ?? DEFAULT_PARTIAL;
      partial = value;
      partialInput.value = value.toFixed(2);
      partialOutput.textContent = value.toFixed(2);
    }
  }
  syncSatisfaction();

  container.append(el("label", { class: "block", for: "statement" }, ["Satisfying statement"]));
  const statementInput = el("textarea", { id: "statement", "data-testid": "statement-input" });
  statementInput.value = seed.statement;
  container.append(statementInput);

  container.append(el("label", { class: "block", for: "names" }, ["Names (comma separated)"]));
  const namesInput = el("input", { type: "text", id: "names", "data-testid": "names-input" });
  namesInput.value = seed.names;
  container.append(namesInput);

  container.append(
    el("label", { class: "block", for: "tools" }, ["Validation tools (comma separated)"]),
  );
  const toolsInput = el("input", { type: "text", id: "tools", "data-testid": "tools-input" });
  toolsInput.value = seed.tools;
  container.append(toolsInput);

  container.append(el("label", { class: "block" }, ["HIPAA safeguard types"]));
  const hipaaRow = el("div", { class: "hipaa-row" });
  const hipaaBoxes = new Map<string, HTMLInputElement>();
  for (const type of HIPAA_TYPES) {
    const box = el("input", { type: "checkbox", "data-testid": `hipaa-${type}` });
    box.checked = seed.hipaa.includes(type);
    hipaaBoxes.set(type, box);
    hipaaRow.append(el("label", {}, [box, ` ${type}`]));
  }
  container.append(hipaaRow);

  container.append(el("label", { class: "block", for: "recorded-by" }, ["Recorded by"]));
  const recordedByInput = el("input", {
    type: "text",
    id: "recorded-by",
    "data-testid": "recorded-by-input",
  });
  recordedByInput.value = seed.recordedBy;
  container.append(recordedByInput);

  const saveButton = el(
    "button",
    { type: "button", class: "save-btn", "data-testid": "save-response" },
    ["Save response"],
  );
  saveButton.addEventListener("click", () => {
    void guarded(async () => {
      if (satisfaction === null) {
        showErrors({ satisfaction: "choose a satisfaction code first" });
        return;
      }
      await callbacks.submitResponse({
        satisfaction,
        partial_value: satisfaction === "P" ? partial : null,
        satisfying_statement: statementInput.value,
        names: splitList(namesInput.value),
        validation_tools: splitList(toolsInput.value),
        hipaa_types: [...hipaaBoxes.entries()]
          .filter(([, box]) => box.checked)
          .map(([type]) => type),
        recorded_by: recordedByInput.value,
      });
    });
  });
  container.append(saveButton);

  if (requirement.odp_slots.length > 0) {
    const section = el("div", { class: "odp-section" });
    section.append(el("label", { class: "block" }, ["Organization-defined parameters"]));
    for (const slot of requirement.odp_slots) {
      const input = el("input", {
        type: "text",
        "data-testid": `odp-input-${slot.ordinal}`,
      });
      input.value = seed.odpValues[slot.ordinal] ?? slot.default_text;
      const apply = el(
        "button",
        { type: "button", class: "apply-btn", "data-testid": `odp-apply-${slot.ordinal}` },
        ["Apply"],
      );
      apply.addEventListener("click", () => {
        void guarded(() => callbacks.submitOdp(slot.ordinal, input.value));
      });
      section.append(
        el("div", { class: "odp-row" }, [
          el("span", {}, [`Slot ${slot.ordinal}`]),
          input,
          apply,
        ]),
      );
    }
    container.append(section);
  }

  if (requirement.tier === "enhanced") {
    const section = el("div", { class: "methods-section" });
    section.append(el("label", { class: "block" }, ["Assessment methods"]));
    const grid = el("table", { class: "methods-grid", "data-testid": "methods-grid" });
    grid.append(
      el("tr", {}, [el("th", {}, ["Method"]), el("th", {}, ["Depth"]), el("th", {}, ["Coverage"])]),
    );
    const selects = new Map<string, HTMLSelectElement>();
    for (const method of ASSESSMENT_METHODS) {
      const row = el("tr", {}, [el("th", {}, [method])]);
      for (const axis of ["depth", "coverage"] as const) {
        const select = el("select", { "data-testid": `method-${method}-${axis}` });
        select.append(el("option", { value: "" }, ["(unset)"]));
        for (const attribute of METHOD_ATTRIBUTES) {
          select.append(el("option", { value: attribute }, [attribute]));
        }
        select.value = seed.methods[method]?.[axis] ?? "";
        selects.set(`${method}.${axis}`, select);
        row.append(el("td", {}, [select]));
      }
      grid.append(row);
    }
    section.append(grid);
    const saveMethods = el(
      "button",
      { type: "button", class: "save-btn", "data-testid": "save-methods" },
      ["Save methods"],
    );
    saveMethods.addEventListener("click", () => {
      void guarded(() => {
        const entryFor = (method: string) => ({
          depth: selects.get(`${method}.depth`)?.value || null,
          coverage: selects.get(`${method}.coverage`)?.value || null,
          evidence: [],
        });
        return callbacks.submitMethods({
          examine: entryFor("examine"),
          interview: entryFor("interview"),
          test: entryFor("test"),
        });
      });
    });
    section.append(saveMethods);
    container.append(section);
  }
}
