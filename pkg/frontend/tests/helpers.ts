/** DOM-driving helpers shared by the browser app tests. */

export function byTestId(root: ParentNode, testId: string): HTMLElement {
  const node = root.querySelector(`[data-testid="${testId}"]`);
  if (!(node instanceof HTMLElement)) {
    throw new Error(`no element with data-testid ${testId}`);
  }
  return node;
}

export function maybeTestId(root: ParentNode, testId: string): HTMLElement | null {
  const node = root.querySelector(`[data-testid="${testId}"]`);
  return node instanceof HTMLElement ? node : null;
}

export function click(root: ParentNode, testId: string): void {
  byTestId(root, testId).click();
}

export function textOf(root: ParentNode, testId: string): string {
  return byTestId(root, testId).textContent ?? "";
}

export async function until(condition: () => boolean, timeoutMs = 3000): Promise<void> {
  const started = Date.now();
  while (!condition()) {
    if (Date.now() - started > timeoutMs) {
      throw new Error("condition not met in time");
    }
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
}

/** Every percentage token the user can actually see under the node.
 * Matches are taken per text node so that adjacent runs such as a
 * "0/25" counter next to a "0.0%" readout are never glued together
 * into a figure nobody rendered. */
export function percentTokens(root: Node): string[] {
  const tokens: string[] = [];
  const walk = (node: Node): void => {
    if (node.nodeType === 3) {
      tokens.push(...((node.textContent ?? "").match(/[0-9]+(?:\.[0-9]+)?%/g) ?? []));
      return;
    }
    for (const child of Array.from(node.childNodes)) {
      walk(child);
    }
  };
  walk(root);
  return tokens;
}

export function setInputValue(root: ParentNode, testId: string, value: string): void {
  const node = byTestId(root, testId);
  if (
    !(node instanceof HTMLInputElement) &&
    !(node instanceof HTMLTextAreaElement) &&
    !(node instanceof HTMLSelectElement)
  ) {
    throw new Error(`element ${testId} does not take a value`);
  }
  node.value = value;
  node.dispatchEvent(new Event("input", { bubbles: true }));
}
