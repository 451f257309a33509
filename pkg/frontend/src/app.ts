/** Application shell: start screen, family navigation, requirement
 * editor, live compliance sidebar, and the radar and effects views.
 *
 * All mutations flow through one pipeline that attaches the latest
 * observed revision. When the service reports a stale revision the app
 * reloads the assessment, rebases its state, retries the edit once, and
 * tells the assessor what happened.
 */

import { ApiClient, ConflictError } from "./api.js";
import type { MethodMatrixPayload, ResponsePayload } from "./api.js";
import { clear, el } from "./dom.js";
import { emptySeed, renderEditor, seedFromResponse } from "./editor.js";
import type { EditorSeed } from "./editor.js";
import { renderSidebar } from "./sidebar.js";
import { renderEffectsView, renderRadarView } from "./views.js";
import type {
  AssessmentDoc,
  CatalogDoc,
  EffectsDoc,
  FamilyDoc,
  RequirementDoc,
  ScoreDoc,
} from "./types.js";

export interface StartOptions {
  level: "medium" | "high";
  organization: string;
  threshold?: number;
}

export interface AppHandle {
  readonly assessmentId: string;
  readonly revision: number;
}

type ViewName = "assess" | "radar" | "effects";

export async function startAssessment(
  root: HTMLElement,
  client: ApiClient,
  options: StartOptions,
): Promise<AppHandle> {
  const created = await client.createAssessment(
    options.level,
    options.organization,
    options.threshold,
  );
  const catalog: CatalogDoc = await client.getCatalog(options.level);

  const state = {
    assessmentId: created.assessment_id,
    revision: created.revision,
    seeds: new Map<string, EditorSeed>(),
    selectedFamily: catalog.families.find((f) => !f.empty)?.code ?? "",
    selectedRequirement: null as string | null,
    activeView: "assess" as ViewName,
    scoreCache: new Map<number, ScoreDoc>(),
    effectsCache: new Map<number, EffectsDoc>(),
  };

  clear(root);

  const notice = el("div", { class: "notice", "data-testid": "notice", hidden: "" });
  const viewTabs = el("div", { class: "view-tabs", role: "tablist" });
  const header = el("header", { class: "app-header" }, [
    el("h1", {}, ["Security Posture Workbench"]),
    el("span", { class: "org", "data-testid": "header-org" }, [options.organization]),
    el("span", { class: "level-chip", "data-testid": "header-level" }, [
      options.level === "high" ? "HIGH (Enhanced)" : "MEDIUM (Base)",
    ]),
    viewTabs,
  ]);

  const navPanel = el("nav", { class: "panel" });
  const familyTabs = el("div", { class: "family-tabs" });
  const reqList = el("ul", { class: "req-list" });
  navPanel.append(familyTabs, reqList);

  const editorContainer = el("section", {
    class: "panel editor",
    "data-testid": "editor",
  });
  const radarContainer = el("section", {
    class: "panel",
    "data-testid": "radar-view",
    hidden: "",
  });
  const effectsContainer = el("section", {
    class: "panel",
    "data-testid": "effects-view",
    hidden: "",
  });
  const mainColumn = el("div", {}, [editorContainer, radarContainer, effectsContainer]);

  const sidebarPanel = el("aside", { class: "panel sidebar", "data-testid": "sidebar" });

  root.append(
    header,
    notice,
    el("div", { class: "layout" }, [navPanel, mainColumn, sidebarPanel]),
  );

  function showNotice(text: string, kind: "warn" | "ok" | "error"): void {
    notice.textContent = text;
    notice.className = kind === "warn" ? "notice" : `notice ${kind}`;
    notice.hidden = false;
  }

  function hideNotice(): void {
    notice.hidden = true;
  }

  function currentFamily(): FamilyDoc | undefined {
    return catalog.families.find((f) => f.code === state.selectedFamily);
  }

  function findRequirement(rid: string | null): RequirementDoc | undefined {
    if (rid === null) {
      return undefined;
    }
    for (const family of catalog.families) {
      const hit = family.requirements.find((r) => r.id === rid);
      if (hit !== undefined) {
        return hit;
      }
    }
    return undefined;
  }

  function getSeed(rid: string): EditorSeed {
    let seed = state.seeds.get(rid);
    if (seed === undefined) {
      seed = emptySeed();
      state.seeds.set(rid, seed);
    }
    return seed;
  }

  function adoptAssessment(doc: AssessmentDoc): void {
    state.revision = doc.revision;
    state.seeds = new Map();
    for (const [rid, response] of Object.entries(doc.responses)) {
      state.seeds.set(
        rid,
        seedFromResponse(response, doc.odp_values[rid], doc.method_matrices[rid]),
      );
    }
    for (const [rid, values] of Object.entries(doc.odp_values)) {
      const seed = getSeed(rid);
      for (const [ordinal, value] of Object.entries(values)) {
        seed.odpValues[Number(ordinal)] = value;
      }
    }
    renderReqList();
  }

  async function refreshSidebar(): Promise<void> {
    let score = state.scoreCache.get(state.revision);
    if (score === undefined) {
      score = await client.getScore(state.assessmentId);
      state.scoreCache.set(state.revision, score);
    }
    renderSidebar(sidebarPanel, score);
  }

  async function refreshActiveView(): Promise<void> {
    if (state.activeView === "radar") {
      renderRadarView(radarContainer, client.radarUrl(state.assessmentId, state.revision));
    } else if (state.activeView === "effects") {
      let doc = state.effectsCache.get(state.revision);
      if (doc === undefined) {
        doc = await client.getEffects(state.assessmentId);
        state.effectsCache.set(state.revision, doc);
      }
      renderEffectsView(effectsContainer, doc);
    }
  }

  async function runMutation(
    mutate: (expectedRevision: number) => Promise<{ revision: number }>,
  ): Promise<void> {
    hideNotice();
    let result;
    try {
      result = await mutate(state.revision);
    } catch (error) {
      if (!(error instanceof ConflictError)) {
        throw error;
      }
      showNotice(
        `Edit conflict: this assessment moved to revision ${error.currentRevision} ` +
          "in another window. Reloading and retrying your edit.",
        "warn",
      );
      const doc = await client.getAssessment(state.assessmentId);
      adoptAssessment(doc);
      result = await mutate(state.revision);
      showNotice(`Conflict resolved: your edit is now revision ${result.revision}.`, "ok");
    }
    state.revision = result.revision;
    await refreshSidebar();
    await refreshActiveView();
  }

  function renderFamilyTabs(): void {
    clear(familyTabs);
    for (const family of catalog.families) {
      const button = el(
        "button",
        {
          type: "button",
          "data-testid": `family-${family.code}`,
          "aria-selected": String(family.code === state.selectedFamily),
          title: family.name,
        },
        [family.code],
      );
      button.addEventListener("click", () => {
        state.selectedFamily = family.code;
        state.selectedRequirement = family.requirements[0]?.id ?? null;
        renderFamilyTabs();
        renderReqList();
        renderActiveEditor();
      });
      familyTabs.append(button);
    }
  }

  function renderReqList(): void {
    clear(reqList);
    const family = currentFamily();
    if (family === undefined) {
      return;
    }
    for (const requirement of family.requirements) {
      const seed = state.seeds.get(requirement.id);
      const code = seed?.satisfaction ?? null;
      const classes = [];
      if (code !== null) {
        classes.push(code === "Y" ? "answered-ok" : "answered-flag");
      }
      const button = el(
        "button",
        {
          type: "button",
          class: classes.join(" "),
          "data-testid": `req-${requirement.id}`,
          "aria-current": String(requirement.id === state.selectedRequirement),
        },
        [
          el("span", {}, [
            requirement.tier === "enhanced" ? `${requirement.id} (e)` : requirement.id,
          ]),
          el("span", { class: "code-mark" }, [code ?? ""]),
        ],
      );
      button.addEventListener("click", () => {
        state.selectedRequirement = requirement.id;
        renderReqList();
        renderActiveEditor();
      });
      reqList.append(el("li", {}, [button]));
    }
  }

  function renderActiveEditor(): void {
    clear(editorContainer);
    const requirement = findRequirement(state.selectedRequirement);
    if (requirement === undefined) {
      editorContainer.append(el("p", {}, ["Select a requirement to begin."]));
      return;
    }
    const seed = state.seeds.get(requirement.id) ?? emptySeed();
    renderEditor(editorContainer, requirement, seed, {
      submitResponse: async (payload) => {
        await runMutation((expectedRevision) =>
          client.patchResponse(state.assessmentId, requirement.id, {
            ...payload,
            expected_revision: expectedRevision,
          } as ResponsePayload),
        );
        const next = getSeed(requirement.id);
        next.satisfaction = payload.satisfaction;
        next.partialValue = payload.partial_value;
        next.statement = payload.satisfying_statement;
        next.names = payload.names.join(", ");
        next.tools = payload.validation_tools.join(", ");
        next.hipaa = [...payload.hipaa_types];
        next.recordedBy = payload.recorded_by;
        renderReqList();
      },
      submitOdp: async (ordinal, value) => {
        await runMutation((expectedRevision) =>
          client.putOdp(state.assessmentId, requirement.id, ordinal, value, expectedRevision),
        );
        getSeed(requirement.id).odpValues[ordinal] = value;
      },
      submitMethods: async (payload) => {
        await runMutation((expectedRevision) =>
          client.putMethods(state.assessmentId, requirement.id, {
            ...payload,
            expected_revision: expectedRevision,
          } as MethodMatrixPayload),
        );
        const seedMethods = getSeed(requirement.id).methods;
        for (const method of ["examine", "interview", "test"] as const) {
          seedMethods[method] = {
            depth: payload[method].depth,
            coverage: payload[method].coverage,
          };
        }
      },
    });
  }

  function selectView(view: ViewName): void {
    state.activeView = view;
    editorContainer.hidden = view !== "assess";
    navPanel.hidden = view !== "assess";
    radarContainer.hidden = view !== "radar";
    effectsContainer.hidden = view !== "effects";
    for (const button of viewTabs.querySelectorAll("button")) {
      button.setAttribute("aria-selected", String(button.dataset.view === view));
    }
    void refreshActiveView();
  }

  const viewNames: ViewName[] = ["assess", "radar"];
  if (options.level === "high") {
    viewNames.push("effects");
  }
  for (const view of viewNames) {
    const button = el(
      "button",
      { type: "button", "data-testid": `tab-${view}` },
      [view === "assess" ? "Assess" : view === "radar" ? "Radar" : "Effects"],
    );
    button.dataset.view = view;
    button.addEventListener("click", () => selectView(view));
    viewTabs.append(button);
  }

  const firstFamily = currentFamily();
  state.selectedRequirement = firstFamily?.requirements[0]?.id ?? null;
  renderFamilyTabs();
  renderReqList();
  renderActiveEditor();
  selectView("assess");
  await refreshSidebar();

  return {
    assessmentId: state.assessmentId,
    get revision() {
      return state.revision;
    },
  };
}

export function initApp(root: HTMLElement, client: ApiClient): void {
  clear(root);
  const screen = el("div", { class: "start-screen" });
  screen.append(el("h1", {}, ["Security Posture Workbench"]));

  screen.append(el("label", { for: "start-level" }, ["Security level"]));
  const levelSelect = el("select", { id: "start-level", "data-testid": "start-level" });
  levelSelect.append(el("option", { value: "high" }, ["High (base + enhanced)"]));
  levelSelect.append(el("option", { value: "medium" }, ["Medium (base only)"]));
  screen.append(levelSelect);

  screen.append(el("label", { for: "start-org" }, ["Organization"]));
  const orgInput = el("input", { type: "text", id: "start-org", "data-testid": "start-org" });
  screen.append(orgInput);

  screen.append(el("label", { for: "start-threshold" }, ["Pass threshold"]));
  const thresholdInput = el("input", {
    type: "number",
    id: "start-threshold",
    "data-testid": "start-threshold",
    min: "0",
    max: "1",
    step: "0.01",
    value: "0.8",
  });
  screen.append(thresholdInput);

  const errorLine = el("p", { class: "field-errors", hidden: "" });
  screen.append(errorLine);

  const startButton = el(
    "button",
    { type: "button", class: "primary-btn", "data-testid": "start-btn" },
    ["Start assessment"],
  );
  startButton.addEventListener("click", () => {
    const level = levelSelect.value === "medium" ? "medium" : "high";
    const threshold = Number(thresholdInput.value);
    startButton.disabled = true;
    void startAssessment(root, client, {
      level,
      organization: orgInput.value,
      threshold: Number.isFinite(threshold) ? threshold : undefined,
    }).catch((error: unknown) => {
      startButton.disabled = false;
      errorLine.textContent =
        error instanceof Error ? error.message : "could not start the assessment";
      errorLine.hidden = false;
    });
  });
  screen.append(startButton);
  root.append(screen);
}
