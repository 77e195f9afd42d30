import { ExtractError } from "./types.js";

const SLOT = "{}";

/** Throw unless the template has exactly one {} slot. */
export function checkTemplate(template: string): void {
  const count = template.split(SLOT).length - 1;
  if (count !== 1) {
    throw new ExtractError(
      `template must contain exactly one ${SLOT} slot, found ${count}: '${template}'`,
    );
  }
}

export function applyTemplate(template: string | undefined, phrase: string): string {
  if (template === undefined) {
    return phrase;
  }
  return template.replace(SLOT, phrase);
}
