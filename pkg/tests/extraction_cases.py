"""Hand-derived extraction fixtures for the bundled lexicon.

Each expectation was worked out by applying the documented rules by hand:
longest match, nearest-finding attachment, pre-cue negation window of 6 tokens
with "but"/"however"/","/";" terminators, completion rules of the bundled
lexicon, one pattern per attached anatomy.
"""

A = "anatomicalfinding"

# (sentence, surface text of the finding, expected polarity)
NEGATION_CASES = [
    ("No pneumothorax.", "pneumothorax", "absent"),
    ("No pneumothorax but effusion.", "effusion", "present"),
    ("No pneumothorax or pleural effusion.", "pleural effusion", "absent"),
    ("No pneumothorax, effusion is present.", "effusion", "present"),
    ("Without any new focal dense opacity.", "opacity", "absent"),
    ("Without evidence of acute change there is opacity.", "opacity", "present"),
    ("Negative for pneumonia; mild edema.", "edema", "present"),
    ("Negative for pneumonia; mild edema.", "pneumonia", "absent"),
    ("There is no evidence of pneumothorax however there is atelectasis.", "atelectasis", "present"),
    ("There is no evidence of pneumothorax however there is atelectasis.", "pneumothorax", "absent"),
    ("Cardiomegaly.", "cardiomegaly", "present"),
    ("Pneumothorax is not seen.", "pneumothorax", "present"),
]

# (report, expected pattern strings T|N|C|A|L|S)
LONGEST_MATCH_CASES = [
    ("Mild opacity in the left lower lobe.", [f"{A}|present|opacity|left lower lobe|left|mild"]),
    ("Pulmonary edema.", [f"{A}|present|edema|lung|bilateral|"]),
    ("Enlarged cardiac silhouette.", [f"{A}|present|cardiomegaly|cardiac silhouette||"]),
    ("No evidence of pneumonia.", ["disease|absent|pneumonia|||"]),
    ("Opacity in the right upper lobe.", [f"{A}|present|opacity|right upper lobe|right|"]),
    ("Widened mediastinum.", [f"{A}|present|mediastinal widening|mediastinum||"]),
    ("Small pleural effusion.", [f"{A}|present|pleural effusion|pleura|bilateral|mild"]),
]

COMPLETION_CASES = [
    ("No pneumothorax.", [f"{A}|absent|pneumothorax|lung|bilateral|"]),
    ("Left pneumothorax.", [f"{A}|present|pneumothorax|lung|left|"]),
    ("Alveolar opacity.", [f"{A}|present|airspace opacity|alveoli|bilateral|"]),
    ("Moderate cardiomegaly.", [f"{A}|present|cardiomegaly|cardiac silhouette||moderate"]),
    ("Endotracheal tube in place.", ["device|present|endotracheal tube|trachea||"]),
    ("Opacity.", [f"{A}|present|opacity|||"]),
    ("Pneumothorax in the right lung.", [f"{A}|present|pneumothorax|lung|right|"]),
]

MULTI_ANATOMY_CASES = [
    ("Opacity in the left lower lobe and right upper lobe.",
     [f"{A}|present|opacity|left lower lobe|left|", f"{A}|present|opacity|right upper lobe|right|"]),
    ("Atelectasis in the right lower lobe and left base.",
     [f"{A}|present|atelectasis|right lower lobe|right|", f"{A}|present|atelectasis|lower lung zone|left|"]),
    ("Mild opacity in the lung and mediastinum.",
     [f"{A}|present|opacity|lung||mild", f"{A}|present|opacity|mediastinum||mild"]),
    ("Nodules in the right apex and right hilum.",
     [f"{A}|present|nodule|apical zone|right|", f"{A}|present|nodule|hilar structures|right|"]),
    ("No consolidation in the lungs or mediastinum.",
     [f"{A}|absent|consolidation|lung||", f"{A}|absent|consolidation|mediastinum||"]),
    # "lung" is one token closer to "effusion" than to "opacity"
    ("Opacity in the left lung and effusion in the right pleural space.",
     [f"{A}|present|opacity||left|", f"{A}|present|pleural effusion|lung|right|",
      f"{A}|present|pleural effusion|pleura|right|"]),
]
