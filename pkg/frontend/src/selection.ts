/** Ad-hoc comparison selection, capped at five departments. The cap is also
 * enforced server-side; blocking here just keeps the UI honest. */

export const MAX_COMPARE = 5;
export const MIN_COMPARE = 2;

export interface SelectionResult {
  selected: string[];
  blocked: boolean;
}

export function toggleSelection(selected: readonly string[], id: string): SelectionResult {
  if (selected.includes(id)) {
    return { selected: selected.filter((s) => s !== id), blocked: false };
  }
  if (selected.length >= MAX_COMPARE) {
    return { selected: [...selected], blocked: true };
  }
  return { selected: [...selected, id], blocked: false };
}

export function canCompare(selected: readonly string[]): boolean {
  return selected.length >= MIN_COMPARE && selected.length <= MAX_COMPARE;
}
